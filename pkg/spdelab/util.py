from io import BytesIO

from anystore.store import get_store
from anystore.types import Uri
from anystore.util import make_checksum

from spdelab.core import paths

CHECKSUM_ALGORITHM = "sha256"


def artifact_checksums(uri: Uri) -> dict[str, str]:
    """SHA256 of every result artifact present below ``uri``. Job records
    carry timestamps and are left out."""
    store = get_store(uri, serialization_mode="raw", raise_on_nonexist=False)
    checksums: dict[str, str] = {}
    for name in paths.ARTIFACTS:
        data = store.get(name)
        if data is not None:
            checksums[name] = make_checksum(BytesIO(data), algorithm=CHECKSUM_ALGORITHM)
    return checksums
