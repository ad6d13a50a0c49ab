from __future__ import annotations

import importlib.util
import subprocess
import sys
from pathlib import Path
from types import SimpleNamespace

import pytest

REPO_ROOT = Path(__file__).resolve().parents[2]
CORPUS_DIR = REPO_ROOT / "corpus"

# A reporting-style account used by the composition tests; printBal is the
# balance-reporting operation fed by sequential composition.
ACCOUNT_SOURCE = """\
class Account
  const limit : NAT
  state
    balance : INT
  where
    balance + limit >= 0
  init
    balance = 0
  op deposit
    delta balance
    amount? : NAT
  where
    balance' = balance + amount?
  end
  op withdrawAvail
    delta balance
    amount! : NAT
  where
    amount! = balance + limit
    balance' = 0 - limit
  end
  op printBal
    bal! : INT
  where
    bal! = balance
  end
end
"""


def _load(path: Path):
    spec = importlib.util.spec_from_file_location(path.stem, path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture(scope="session")
def generated(tmp_path_factory):
    """Corpus modules produced by the compiler CLI (the primary component's
    external interface), imported fresh for this test session."""
    out = tmp_path_factory.mktemp("generated")
    account_src = tmp_path_factory.mktemp("fixture-src") / "account.oz"
    account_src.write_text(ACCOUNT_SOURCE, encoding="utf-8")
    subprocess.run(
        [
            sys.executable,
            "-m",
            "ozc",
            "build",
            str(CORPUS_DIR / "creditcard.oz"),
            str(CORPUS_DIR / "twocards.oz"),
            str(account_src),
            "-o",
            str(out),
        ],
        check=True,
    )
    return SimpleNamespace(
        creditcard=_load(out / "creditcard.py"),
        twocards=_load(out / "twocards.py"),
        account=_load(out / "account.py"),
        out_dir=out,
    )
