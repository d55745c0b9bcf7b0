import json
import shutil

import pytest

from boolattice.catalog import (CASES, SOURCES, DataError, UnknownCase, UnknownGroup,
                                case_expectations, fano_borel, load_group, ore_pair, resolve_group,
                                run_case)
from boolattice.groups import (GroupError, alternating_group, is_block, point_stabilizer,
                               symmetric_group)
from boolattice.lattice import IntervalLattice, boolean_certificate
from boolattice.totients import totient_report
from boolattice.catalog import data_dir


def stabilizer_chain_orbit_sizes(G, points):
    sizes = []
    for p in points:
        orb = next(o for o in G.orbits() if p in o)
        sizes.append(len(orb))
        G = point_stabilizer(G, p)
    return sizes, G.order


@pytest.mark.parametrize("name,degree,order", [
    ("m12", 12, 95040), ("m11", 11, 7920), ("psl27_deg7", 7, 168), ("psl27_deg8", 8, 168),
    ("psl2_11", 12, 660), ("agl_3_2", 8, 1344)])
def test_shipped_orders(name, degree, order):
    G = load_group(name)
    assert G.degree == degree and G.order == order
    assert G.is_transitive()


def test_mathieu_groups_sharply_transitive():
    # M12 is sharply 5-transitive on 12 points and M11 sharply 4-transitive on 11
    sizes, rest = stabilizer_chain_orbit_sizes(load_group("m12"), range(5))
    assert sizes == [12, 11, 10, 9, 8] and rest == 1
    sizes, rest = stabilizer_chain_orbit_sizes(load_group("m11"), range(4))
    assert sizes == [11, 10, 9, 8] and rest == 1


def test_projective_groups_two_transitive():
    for name, n in (("psl27_deg7", 7), ("psl27_deg8", 8), ("psl2_11", 12)):
        sizes, _ = stabilizer_chain_orbit_sizes(load_group(name), range(2))
        assert sizes == [n, n - 1]


def test_resolve_group(tmp_path):
    assert resolve_group("sym:5").order == 120
    assert resolve_group("alt:6").order == 360
    assert resolve_group("agl:3:2").order == 1344
    assert resolve_group("psl27").degree == 8
    assert resolve_group("psl32").degree == 7
    spec = {"degree": 4, "generators": [[1, 2, 3, 0], [1, 0, 2, 3]], "order": "24"}
    path = tmp_path / "s4.json"
    path.write_text(json.dumps(spec))
    assert resolve_group(str(path)).order == 24
    with pytest.raises(UnknownGroup):
        resolve_group("sym:x")
    with pytest.raises(UnknownGroup):
        resolve_group("nosuchgroup")


def copy_data(tmp_path, monkeypatch):
    target = tmp_path / "data"
    shutil.copytree(data_dir(), target)
    monkeypatch.setenv("BOOLATTICE_DATA_DIR", str(target))
    return target


def test_data_dir_override_detects_wrong_order(tmp_path, monkeypatch):
    target = copy_data(tmp_path, monkeypatch)
    data = json.loads((target / "m11.json").read_text())
    data["order"] = "7921"
    (target / "m11.json").write_text(json.dumps(data))
    with pytest.raises(GroupError):
        load_group("m11")


def test_data_dir_override_detects_wrong_generator(tmp_path, monkeypatch):
    target = copy_data(tmp_path, monkeypatch)
    data = json.loads((target / "psl27_deg7.json").read_text())
    data["generators"][0] = list(range(7))
    (target / "psl27_deg7.json").write_text(json.dumps(data))
    with pytest.raises(GroupError):
        load_group("psl27_deg7")


def test_data_dir_override_malformed(tmp_path, monkeypatch):
    target = copy_data(tmp_path, monkeypatch)
    (target / "m12.json").write_text("{not json")
    with pytest.raises(DataError):
        load_group("m12")
    (target / "agl_3_2.json").write_text(json.dumps({"degree": 8}))
    with pytest.raises(DataError):
        load_group("agl_3_2")


def test_expectations_carry_sources():
    data = case_expectations()
    assert set(data) == set(CASES)
    for entry in data.values():
        for e in entry.get("expect", []):
            assert e["source"] in SOURCES


def test_expectation_without_source_rejected(tmp_path, monkeypatch):
    target = copy_data(tmp_path, monkeypatch)
    data = json.loads((target / "cases.json").read_text())
    del data["alt6-rank2"]["expect"][0]["source"]
    (target / "cases.json").write_text(json.dumps(data))
    with pytest.raises(DataError):
        case_expectations()


@pytest.mark.parametrize("name", ["alt6-rank2", "borel-psl32", "fact2-exception", "octal"])
def test_named_cases_pass(name):
    rep = run_case(name)
    assert rep.ok, rep.summary()
    d = rep.to_dict()
    json.dumps(d)
    assert d["ok"] and d["case"] == name


@pytest.mark.parametrize("ell,phi_hat,rank", [(1, 2, 2), (2, 4, 3)])
def test_ore_family(ell, phi_hat, rank):
    rep = run_case("ore-family", ell=ell)
    assert rep.ok, rep.summary()
    assert rep.rank == rank
    assert rep.analyses["main"].totients.phi_hat == phi_hat
    assert rep.analyses["main"].coset_count == rep.analyses["main"].totients.phi


def test_ore_pair_orders():
    G, H = ore_pair(2)
    assert G.order == 72 and H.order == 4
    with pytest.raises(ValueError):
        run_case("ore-family", ell=4)


def test_borel_subgroup():
    G, B = fano_borel()
    assert G.order == 168 and B.order == 8
    assert B.is_subgroup_of(G)


def test_unknown_case():
    with pytest.raises(UnknownCase):
        run_case("no-such-case")


def test_summary_mentions_sources():
    rep = run_case("alt6-rank2")
    text = rep.summary()
    assert "[paper]" in text and "[derived]" in text


@pytest.mark.parametrize("name", ["alt6-rank2", "octal"])
def test_cases_are_deterministic_and_round_trip(name):
    first, second = run_case(name), run_case(name)
    assert first.to_dict() == second.to_dict()
    for a in first.analyses.values():
        R = IntervalLattice.from_dict(json.loads(a.lattice.to_json()))
        assert totient_report(R).to_dict() == totient_report(a.lattice).to_dict()
        assert boolean_certificate(R).to_dict() == boolean_certificate(a.lattice).to_dict()


@pytest.mark.parametrize("G", [load_group(n) for n in ("m12", "m11", "psl27_deg7", "psl27_deg8",
                                                        "psl2_11", "agl_3_2")]
                         + [alternating_group(6), symmetric_group(5)])
def test_fixed_points_of_point_stabilizer_form_a_block(G):
    S = point_stabilizer(G, 0)
    fixed = [x for x in range(G.degree) if all(g[x] == x for g in S.generators)]
    assert 0 in fixed
    assert is_block(G.degree, G.generators, fixed)
