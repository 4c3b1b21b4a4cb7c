from .records import (
    DEFAULT_ERROR_THRESHOLD,
    Announcement,
    Denial,
    PhotonPairRecord,
    ProtocolConfig,
    Role,
    SessionResult,
    Status,
    Transcript,
)
from .session import Sharer, prepare_sequence, sharer_encrypt
from .standard import StandardSession, run_session
from .variant import VariantSession, run_variant_session


def run_any(config, message_bits, adversary=None, rng=None) -> SessionResult:
    """Dispatch on ``config.variant``."""
    runner = run_variant_session if config.variant else run_session
    return runner(config, message_bits, adversary, rng)
