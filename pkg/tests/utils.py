import unittest

from snowtrack.utils._import_utils import is_orjson_available, is_rich_available


def require_rich(test_case):
    if not is_rich_available():
        test_case = unittest.skip("test requires rich")(test_case)
    return test_case


def require_orjson(test_case):
    if not is_orjson_available():
        test_case = unittest.skip("test requires orjson")(test_case)
    return test_case
