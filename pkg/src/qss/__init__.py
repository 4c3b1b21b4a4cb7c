"""Exact simulation of Bell-pair quantum secret sharing of direct communication."""
from .adversary import AdversaryKind, AdversaryStrategy
from .errors import ConfigError
from .protocol import ProtocolConfig, SessionResult, Status, run_any, run_session, run_variant_session

__version__ = "0.1.0"
