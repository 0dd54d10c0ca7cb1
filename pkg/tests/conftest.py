from __future__ import annotations

from pathlib import Path

import pytest

from lite_repair.model import ConceptAssertion, RoleAssertion
from lite_repair.textio import parse_kb, parse_query

DATA = Path(__file__).parent / "data"


def ca(concept: str, individual: str) -> ConceptAssertion:
    return ConceptAssertion(concept, individual)


def ra(role: str, subject: str, obj: str) -> RoleAssertion:
    return RoleAssertion(role, subject, obj)


@pytest.fixture(scope="session")
def ex_kb_text() -> str:
    return (DATA / "ex.dlkb").read_text()


@pytest.fixture(scope="session")
def ex_kb(ex_kb_text):
    return parse_kb(ex_kb_text)


@pytest.fixture(scope="session")
def ex_query():
    return parse_query((DATA / "ex.dlq").read_text())
