from glob import has_magic
from typing import IO, Any, TypeAlias

from fsspec import AbstractFileSystem
from fsspec import open as fsspec_open
from fsspec.core import url_to_fs
from fsspec.implementations.dirfs import DirFileSystem
from fsspec.implementations.local import LocalFileSystem

from snowtrack.utils._import_utils import check_required_dependencies


SCHEMA_VERSION = 1


class DataFolder(DirFileSystem):
    """A thin wrapper around fsspec's DirFileSystem. Every path is relative to `path`, which may be local or remote.
    Used for experiment outputs, task logs, completion markers and any json document read or written by the CLI.

    Args:
        path: the path to the folder (local or remote)
        fs: the filesystem to use (see fsspec for more details)
        auto_mkdir: whether to automatically create the parent directories when opening a file in write mode
        **storage_options: additional options to pass to the filesystem
    """

    def __init__(
        self,
        path: str,
        fs: AbstractFileSystem | None = None,
        auto_mkdir: bool = True,
        **storage_options,
    ):
        super().__init__(path=path, fs=fs if fs else url_to_fs(path, **storage_options)[0])
        self.auto_mkdir = auto_mkdir

    def list_files(self, subdirectory: str = "", recursive: bool = True, glob_pattern: str | None = None) -> list[str]:
        """
        Sorted list of the files under `subdirectory`. A `glob_pattern` without wildcards is treated as an extension.

        Returns: a list of file paths, relative to `self.path`
        """
        if glob_pattern and not has_magic(glob_pattern):
            glob_pattern = f"*{glob_pattern}"
        maxdepth = 1 if not recursive else None
        found = (
            self.find(subdirectory, maxdepth=maxdepth, detail=True)
            if not glob_pattern
            else self.glob(
                self.fs.sep.join([subdirectory, glob_pattern]) if subdirectory else glob_pattern,
                maxdepth=maxdepth,
                detail=True,
            )
        )
        return sorted(f for f, info in found.items() if info["type"] != "directory")

    def open(self, path, mode="rb", *args, **kwargs):
        """Open a file, creating its parent directories first when writing and `auto_mkdir` is set."""
        if self.auto_mkdir and ("w" in mode or "a" in mode):
            self.fs.makedirs(self.fs._parent(self._join(path)), exist_ok=True)
        return super().open(path, mode=mode, *args, **kwargs)

    def is_local(self):
        return isinstance(self.fs, LocalFileSystem)


def get_datafolder(data: "DataFolderLike | tuple[str, AbstractFileSystem]") -> DataFolder:
    """
    `DataFolder` factory. Accepts a `DataFolder`, a path string (`/home/user/runs`, `s3://bucket/runs`),
    `(path, storage_options)` or `(path, fsspec filesystem)`.
    """
    if isinstance(data, DataFolder):
        return data
    if isinstance(data, str):
        return DataFolder(data)
    if isinstance(data, tuple) and isinstance(data[0], str) and isinstance(data[1], dict):
        return DataFolder(data[0], **data[1])
    if isinstance(data, tuple) and isinstance(data[0], str) and isinstance(data[1], AbstractFileSystem):
        return DataFolder(data[0], fs=data[1])
    raise ValueError(
        "You must pass a DataFolder instance, a str path, a (str path, fs_init_kwargs) or (str path, fs object)"
    )


def open_file(file: IO | str, mode="rt", **kwargs):
    """Opens `file` with fsspec when given a path, returns it unchanged when it is already file-like."""
    if isinstance(file, str):
        return fsspec_open(file, mode, **kwargs)
    return file


def dump_document(document: dict[str, Any]) -> bytes:
    """Serializes a json document, stamping it with the current `schema_version`."""
    check_required_dependencies("json documents", ["orjson"])
    import orjson

    return orjson.dumps(
        {"schema_version": SCHEMA_VERSION, **document}, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS
    )


def load_document(data: bytes | str) -> dict[str, Any]:
    check_required_dependencies("json documents", ["orjson"])
    import orjson

    document = orjson.loads(data)
    if isinstance(document, dict) and document.get("schema_version", SCHEMA_VERSION) > SCHEMA_VERSION:
        raise ValueError(f"Unsupported schema_version {document['schema_version']} (latest is {SCHEMA_VERSION})")
    return document


def write_document(file: IO | str, document: dict[str, Any]):
    with open_file(file, mode="wb") as f:
        f.write(dump_document(document))


def read_document(file: IO | str) -> dict[str, Any]:
    with open_file(file, mode="rb") as f:
        return load_document(f.read())


DataFolderLike: TypeAlias = str | tuple[str, dict] | DataFolder
