from xiflow.ibp import (
    PARTITION_COUNTS,
    classify_monomials,
    enumerate_partitions,
    factorizations,
    generators,
    gram_basis,
)
from xiflow.ratcore import ALPHA
from xiflow.xicalc import xi


def test_partition_counts_table():
    for m in range(21):
        assert len(enumerate_partitions(m)) == PARTITION_COUNTS[m], m


def test_partitions_of_three_ordered():
    parts = enumerate_partitions(3)
    assert [p.render() for p in parts] == ["x3", "x1*x2", "x1^3"]


def test_partition_counts_from_source():
    assert len(enumerate_partitions(7)) == 15
    assert len(enumerate_partitions(9)) == 30
    assert len(enumerate_partitions(10)) == 42


def test_generator_counts():
    for n, r in ((1, 1), (2, 3), (3, 7), (4, 15), (5, 30)):
        assert len(generators(n)) == r


def test_generator_homogeneity_and_leading_coefficient():
    for n in (1, 2, 3, 4, 5):
        for g in generators(n):
            assert g.poly.is_homogeneous(2 * n)
            s = g.partition.total_degree
            lead = g.poly.coefficient(g.partition.times_var(1))
            assert lead == ALPHA - s, (n, g.partition.render())


def test_gram_basis_examples():
    assert [m.render() for m in gram_basis(2)] == ["x1^2", "x2"]
    assert [m.render() for m in gram_basis(4)] == ["x1^4", "x1^2*x2", "x1*x3", "x2^2", "x4"]
    assert len(gram_basis(5)) == 7


def test_classification_examples():
    rep, mv = classify_monomials(2)
    assert {m.render() for m in rep} == {"x1^4", "x1^2*x2", "x2^2"}
    assert {m.render() for m in mv} == {"x1*x3", "x4"}
    _, mv3 = classify_monomials(3)
    assert {m.render() for m in mv3} == {"x2^3", "x1^2*x4", "x2*x4", "x1*x5", "x6"}
    _, mv4 = classify_monomials(4)
    assert {m.render() for m in mv4} == {
        "x8", "x3*x5", "x2*x6", "x2*x3^2", "x1*x7", "x1*x2*x5", "x1^2*x6", "x1^3*x5"
    }


def test_classification_partitions_weight_set():
    for n in (2, 3, 4, 5):
        rep, mv = classify_monomials(n)
        assert len(rep) + len(mv) == len(enumerate_partitions(2 * n))
        assert set(rep) & set(mv) == set()
    assert len(classify_monomials(2)[0]) == 3
    assert len(classify_monomials(3)[0]) == 6


def test_factorizations_slack_counts():
    # unique factorization everywhere at n=2 and n=3
    for n in (2, 3):
        for m in classify_monomials(n)[0]:
            assert len(factorizations(n, m)) == 1
    # x1^4 x2^2 = (x1^4)(x2^2) = (x1^2 x2)^2 at n=4
    assert len(factorizations(4, xi((1, 4), (2, 2)))) == 2
    total_extra = sum(len(factorizations(4, m)) - 1 for m in classify_monomials(4)[0])
    assert total_extra == 1
    total_extra5 = sum(len(factorizations(5, m)) - 1 for m in classify_monomials(5)[0])
    assert total_extra5 == 3
