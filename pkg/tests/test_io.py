import shutil
import tempfile
import unittest

from snowtrack.io import (
    SCHEMA_VERSION,
    DataFolder,
    dump_document,
    get_datafolder,
    load_document,
    read_document,
    write_document,
)

from .utils import require_orjson


class TestIO(unittest.TestCase):
    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.tmp_dir)

    def test_make_dirs(self):
        df = get_datafolder(self.tmp_dir)
        with df.open("subdir1/subdir2/some_path.txt", "wt") as f:
            f.write("hello")
        assert df.isdir("subdir1/subdir2")
        self.assertTrue(df.is_local())

    def test_list_files(self):
        df = get_datafolder(self.tmp_dir)
        for path in ("trials/00001.jsonl", "trials/00000.jsonl", "trials/notes.txt", "report.csv"):
            df.open(path, "wt").close()
        self.assertEqual(df.list_files("trials", glob_pattern="jsonl"), ["trials/00000.jsonl", "trials/00001.jsonl"])
        self.assertEqual(len(df.list_files()), 4)
        self.assertEqual(df.list_files("trials", recursive=False, glob_pattern="*.txt"), ["trials/notes.txt"])

    def test_get_datafolder(self):
        df = get_datafolder(self.tmp_dir)
        self.assertIs(get_datafolder(df), df)
        self.assertIsInstance(get_datafolder((self.tmp_dir, {})), DataFolder)
        with self.assertRaises(ValueError):
            get_datafolder(42)

    @require_orjson
    def test_documents(self):
        path = f"{self.tmp_dir}/doc.json"
        write_document(path, {"bound": 2, "kind": "heegaard"})
        document = read_document(path)
        self.assertEqual(document, {"bound": 2, "kind": "heegaard", "schema_version": SCHEMA_VERSION})
        self.assertEqual(dump_document(document), dump_document({"kind": "heegaard", "bound": 2}))
        with self.assertRaises(ValueError):
            load_document(b'{"schema_version": 99}')
