"""Set-theory proof scripts with ATP-backed automation: a small checker,
first- and higher-order problem generation, prover driving, script
minimization, proof-skeleton import, and an interactive session service."""

__version__ = "0.1.0"
