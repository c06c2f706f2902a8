"""MATT: a type checker for multimodal adjoint type theory over finite mode
theories, with a finite-category engine that builds the co-dextrification and
verifies its laws."""

__version__ = "0.1.0"
