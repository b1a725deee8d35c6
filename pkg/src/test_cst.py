import pytest

from config import IndexConfig
from errors import BadSymbol, DepthOutOfRange, InvalidNode, IsRoot
from index_file import TextIndex
from text_core import ingest
from verify import fibonacci_word, verify_text

SAMPLE = b"abaababababaababa"
A, B = 1, 2
NONE = (0, 0)

CONFIGS = [IndexConfig(tau=1), IndexConfig(tau=2), IndexConfig()]


def sample_tree(config):
    return TextIndex.from_text(ingest(SAMPLE, config), config).cst


@pytest.fixture(params=CONFIGS, ids=["tau1", "tau2", "plain"])
def tree(request):
    return sample_tree(request.param)


def test_root_and_depths(tree):
    root = tree.root()
    assert root == (0, 18)
    assert tree.sdepth(root) == 0
    assert tree.sdepth((4, 11)) == 3
    assert tree.sdepth((0, 1)) == 1
    assert tree.sdepth((1, 11)) == 1
    assert tree.sdepth((11, 18)) == 2


def test_node_basics(tree):
    assert tree.count((4, 11)) == 7
    assert tree.isleaf((0, 1))
    assert not tree.isleaf((4, 11))
    assert tree.index((4, 11)) == 4
    assert tree.findleaf(1) == (6, 7)
    assert tree.letter((4, 11), 2) == B
    assert tree.string((4, 11)) == (A, B, A)
    assert tree.string(tree.root()) == ()
    assert tree.isancestor((1, 11), (4, 11))
    assert not tree.isancestor((4, 11), (1, 11))


def test_index_reads_the_last_suffix_of_the_interval(tree):
    assert isinstance(tree.text_index, TextIndex)
    sa = [18, 17, 12, 3, 15, 10, 1, 13, 8, 6, 4, 16, 11, 2, 14, 9, 7, 5]
    for b, e in [(0, 1), (1, 11), (4, 11), (11, 18), (0, 18)]:
        assert tree.index((b, e)) == sa[e - 1]
    assert tree.letter((11, 18), 2) == A
    assert tree.slink((4, 11)) == (11, 18)


def test_lca_and_wa(tree):
    assert tree.lca(tree.findleaf(15), tree.findleaf(4)) == (4, 11)
    assert tree.lca((4, 11), (4, 11)) == (4, 11)
    assert tree.lca((0, 1), (11, 18)) == tree.root()
    v = (4, 11)
    assert tree.wa(v, 0) == tree.root()
    assert tree.wa(v, 3) == v
    assert tree.wa(v, 2) == v
    assert tree.wa(v, 1) == (1, 11)


def test_parent_and_children(tree):
    root = tree.root()
    assert tree.parent((4, 11)) == (1, 11)
    assert tree.parent((0, 1)) == root
    assert tree.child(root, A) == (1, 11)
    assert tree.child(root, 0) == (0, 1)
    assert tree.child((1, 11), B) == (4, 11)
    assert tree.child((0, 1), A) == NONE
    assert tree.firstchild(root) == (0, 1)
    assert tree.lastchild(root) == (11, 18)
    assert tree.rightsibling((0, 1)) == (1, 11)
    assert tree.leftsibling((0, 1)) == NONE
    assert tree.rightsibling((11, 18)) == NONE
    assert tree.pred_child(root, B) == (11, (1, 11))


def test_links(tree):
    assert tree.slink((4, 11)) == (11, 18)
    assert tree.slink_k((4, 11), 3) == tree.root()
    assert tree.wlink((11, 18), A) == (4, 11)
    assert tree.wlink_prime((11, 18), A) == (4, 11)
    # "bba" never occurs
    assert tree.wlink((11, 18), B) == NONE
    assert tree.wlink_prime(tree.root(), 0) == (0, 1)


def test_errors(tree):
    with pytest.raises(InvalidNode):
        tree.sdepth((3, 3))
    with pytest.raises(InvalidNode):
        tree.count((0, 19))
    with pytest.raises(IsRoot):
        tree.parent(tree.root())
    with pytest.raises(DepthOutOfRange):
        tree.wa((4, 11), 4)
    with pytest.raises(DepthOutOfRange):
        tree.slink_k((4, 11), 0)
    with pytest.raises(BadSymbol):
        tree.wlink_prime(tree.root(), 3)


MIXED_RUNS = b"a" * 10 + b"b" + b"a" * 12 + b"c" + b"a" * 9 + b"b" + b"a" * 11


@pytest.mark.parametrize("raw,tau", [
    (b"abcabbcaacbbacbcabaccbab" * 2, 1),
    (b"bbabaabababbbabaabaaabbbaababbab" * 2, 2),
    (b"abaacbabcbbaacabcababcbaacbbbacaa", 3),
    (b"a" * 40, 3),
    (b"ab" * 20, 6),
    (MIXED_RUNS, 3),
    (fibonacci_word(55), 3),
])
def test_all_operations_match_explicit_tree(raw, tau):
    report = verify_text(raw, IndexConfig(tau=tau), name="cst", checks=("st",))
    assert report.checks > 0
    assert report.ok, report.detail()


def test_plain_tree_matches_explicit_tree():
    report = verify_text(b"abracadabra" * 3, name="plain", checks=("st",))
    assert report.fallback
    assert report.ok, report.detail()
