"""Proof file parsing, printing, and the bundled corpus files."""

from realizability.corpus import (
    coquand_proof, em1_file_sig, minimum_proof, minimum_sig, proof_file_text,
)
from realizability.logic import EM1, check_proof
from realizability.prooffile import parse_proof_file, print_proof, proof_of_sexpr
from realizability.realizer import extract
from realizability.sexpr import parse_one


def test_bundled_files_parse_and_check():
    for name in ("em1", "minimum", "coquand"):
        with open(f"proofs/{name}.nd") as fh:
            pf = parse_proof_file(fh.read())
        checked = check_proof(pf.proof, pf.sig)
        assert not checked.assumptions
        extract(checked)


def test_bundled_files_match_generators():
    for name in ("em1", "minimum", "coquand"):
        with open(f"proofs/{name}.nd") as fh:
            on_disk = fh.read()
        assert on_disk == proof_file_text(name)


def test_proof_round_trip_em1():
    pf = parse_proof_file(proof_file_text("em1"))
    assert pf.proof == EM1("P")


def test_proof_round_trip_minimum_and_coquand():
    table = {0: 3, 1: 2, 2: 1}
    sig = minimum_sig(table)
    for builder, name in ((minimum_proof, "minimum"), (coquand_proof, "coquand")):
        expected = builder(sig)
        pf = parse_proof_file(proof_file_text(name))
        assert pf.proof == expected


def test_print_parse_round_trip():
    sig = minimum_sig({0: 2, 1: 1})
    proof = minimum_proof(sig)
    text = print_proof(proof)
    again = proof_of_sexpr(parse_one(text), sig, {})
    assert again == proof
