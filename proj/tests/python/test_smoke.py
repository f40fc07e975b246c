"""Smoke tests for the python bindings."""

import pytest

import dnets


def test_images_and_metric():
    a = dnets.BinaryImage.from_rows(["10", "01"])
    b = dnets.BinaryImage.from_rows(["11", "01"])
    assert a.side == 2
    assert a.weight == 2
    assert dnets.hamming_distance(a, b) == 1
    assert dnets.adjacent(a, b)
    assert not dnets.adjacent(a, dnets.BinaryImage(2, 0b1100 ^ a.bits))
    assert len(dnets.standard_basis(3)) == 9


def test_pbm_round_trip(tmp_path):
    img = dnets.BinaryImage.from_rows(["101", "010", "001"])
    path = str(tmp_path / "img.pbm")
    dnets.write_pbm(path, img)
    assert dnets.read_pbm(path) == img


def test_operations_compose_and_serialize():
    u5 = dnets.Universe.table(5)
    add = dnets.linear_mod_p_operation(5, [1, 1])
    pi = dnets.project(1, 1, u5)
    doubled = dnets.compose(add, [pi, pi])
    assert [doubled([x]) for x in range(5)] == [(2 * x) % 5 for x in range(5)]

    reparsed = dnets.Operation.from_json(doubled.to_json())
    assert [reparsed([x]) for x in range(5)] == [doubled([x]) for x in range(5)]


def test_dihedral_action():
    rot = dnets.dihedral_endo("r", 2)
    a = dnets.BinaryImage.from_rows(["10", "00"])
    assert dnets.BinaryImage(2, rot([a.bits])).get(0, 1) == a.get(0, 0)
    assert dnets.dihedral_compose("r", "r") == "r2"


def test_polymorphism_oracle():
    ham2 = dnets.hamming_structure(2)
    basis = dnets.standard_basis(2)
    good = dnets.multilinear_indicator(basis[0], [basis[1], basis[2]])
    assert dnets.is_polymorphism(good, ham2)["verdict"]

    bad = dnets.bitwise_and_operation(2, 2)
    witness = dnets.is_polymorphism(bad, ham2)
    assert not witness["verdict"]
    assert "counterexample" in witness


def test_net_evaluate_round_trip():
    u5 = dnets.Universe.table(5)
    net = dnets.NeuralNet(
        layers=[["x1", "x2"], ["y"]],
        edges=[("x1", "y"), ("x2", "y")],
        universe=u5,
        activations={"y": dnets.linear_mod_p_operation(5, [1, 4])},
    )
    assert net.evaluate([3, 1]) == [(3 + 4) % 5]
    back = dnets.NeuralNet.from_json(net.to_json())
    assert back.evaluate([2, 2]) == net.evaluate([2, 2])


def test_training_is_monotone():
    rot = dnets.dihedral_endo("r", 2)
    ident = dnets.dihedral_endo("e", 2)
    net = dnets.NeuralNet(
        layers=[["x"], ["y"]],
        edges=[("x", "y")],
        universe=dnets.Universe.images(2),
        activations={"y": ident},
    )
    pairs = [([a], [rot([a])]) for a in range(16)]
    H = dnets.build_H(2, dihedral=True, swap_masks=2, blank_masks=2, seed=3)
    eta = dnets.neighbor_twist(H, [], sample_bound=24)
    out = dnets.train(net, eta, dnets.loss_hamming(2), pairs, max_iterations=40, seed=11)
    losses = [row[3] for row in out["trace"]]
    assert all(b <= a for a, b in zip(losses, losses[1:]))
    assert out["final_loss"] <= out["initial_loss"]


def test_dominion_pipeline():
    dom = dnets.generate_dominion(2, 2, 3, seed=4)
    assert dnets.is_dominion(dom)["verdict"]
    poly = dnets.dominion_polymorphism_from_walk(dom, seed=4)
    if poly is None:
        pytest.skip("cyclic minc for this seed")
    ham2 = dnets.hamming_structure(2)
    assert dnets.is_polymorphism(poly, ham2)["verdict"]


def test_errors_surface_as_exceptions():
    with pytest.raises(Exception):
        dnets.project(2, 3, dnets.Universe.table(5))
    with pytest.raises(Exception):
        dnets.multilinear_indicator(dnets.BinaryImage(2), [dnets.BinaryImage(2)])
