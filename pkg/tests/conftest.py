import pytest

from codecontrast.eval.synthetic import generate_corpus
from codecontrast.tokenizer import train_vocab

MERGE_SORT = """// Split the array into halves and merge them recursively
function mergeSort (arr) {
  if (arr.length === 1) {
    // return once we hit an array with a single item
    return arr;
  }
  const middle = Math.floor(arr.length / 2);
  // get the middle item of the array rounded down
  const left = arr.slice(0, middle);
  // items on the left side
  const right = arr.slice(middle);
  // items on the right side
  return merge(
    mergeSort(left),
    mergeSort(right)
  );
}
"""


@pytest.fixture(scope="session")
def small_corpus():
    return generate_corpus(40, seed=3)


@pytest.fixture(scope="session")
def small_vocab(small_corpus):
    return train_vocab([r["source"] for r in small_corpus], size=600)


ACCEPTANCE: dict = {}


def record(criterion: str, passed: bool, detail: str) -> bool:
    ACCEPTANCE[criterion] = (passed, detail)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key}: {'PASS' if passed else 'FAIL'} | {detail}")
