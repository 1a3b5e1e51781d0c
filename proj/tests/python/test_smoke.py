import fgl


def test_parikh_worked_example():
    assert fgl.parikh("abbbacab", 3) == [3, 4, 1]


def test_convolution_agrees():
    u = [1, 0, 1]
    v = [1, 1]
    assert fgl.convolve_naive(u, v) == [1, 1, 1, 1]
    assert fgl.convolve_fast(u, v) == [1, 1, 1, 1]
    big_u = [i % 97 for i in range(300)]
    big_v = [(7 * i) % 53 for i in range(200)]
    assert fgl.convolve_fast(big_u, big_v) == fgl.convolve_naive(big_u, big_v)


def test_generate_and_solvers():
    inst = fgl.generate(64, seed=7, plant="conv")
    i, j = inst.planted
    assert inst.a[i] + inst.a[j] == inst.a[i + j]
    w = fgl.solve_conv3sum_naive(inst)
    assert w is not None and w["kind"] == "conv"
    wi, wj = w["indices"]
    assert inst.a[wi] + inst.a[wj] == inst.a[wi + wj]


def test_3sum():
    assert fgl.solve_3sum_naive([-3, 1, 2], [-3, 1, 2], [-3, 1, 2]) is not None
    assert fgl.solve_3sum_naive([1], [1], [1]) is None


def test_reduction_agrees_with_oracle():
    for seed in range(4):
        inst = fgl.generate(96, 4096, seed, "conv" if seed % 2 else "none")
        got = fgl.reduce_conv3sum(inst, R=4, X=16, seed=seed)
        oracle = fgl.solve_conv3sum_naive(inst)
        assert (got["witness"] is None) == (oracle is None)


def test_witness_tree_enumeration():
    tree = fgl.build_ones_tree(8, [0, 1, 3], 8, [0, 2], X=1, R=1, max_ones=8)
    assert tree.enumerate(2) == [(0, 2)]
    assert tree.enumerate(2) == fgl.witnesses_at(8, [0, 1, 3], 8, [0, 2], 2)


def test_histogram_index():
    idx = fgl.HistogramIndex("abbbacab", 3)
    assert idx.report([1, 1, 0]) == [0, 3, 6]
    assert idx.decide([1, 1, 0])
    assert not idx.decide([8, 0, 0])


def test_histogram_pipelines():
    inst = fgl.generate(64, seed=11, plant="diff")
    rep = fgl.reporting_pipeline(inst, R=512, ell=3, seed=2)
    assert rep["witness"] is not None
    i, k = rep["witness"]["indices"]
    assert inst.a[k] - inst.a[i] == inst.a[k - i]

    dec = fgl.decision_pipeline(inst, ell=3, seed=3)
    assert dec is not None

    none_inst = fgl.ConvInstance([1, 2, 3])
    assert fgl.decision_pipeline(none_inst, ell=3, seed=4) is None
    assert fgl.reporting_pipeline(none_inst, R=512, ell=3)["witness"] is None


def test_split_structure_transparency():
    inst = fgl.generate(32, seed=5, plant="diff")
    h = fgl.draw_hash(seed=9, s=6)
    enc = fgl.encode(inst, h, 64, 3, 1)
    whole = fgl.HistogramIndex(enc.S, 3)
    ss = fgl.build_split_structure(enc, 0.5)
    for k in (1, 2, 5):
        for member in fgl.carry_set(k, enc.hashed[k], 64, 3):
            if 1 <= sum(member) <= len(enc.S):
                assert ss.query(member, k) == whole.report(member)


def test_partial_ops():
    assert fgl.partial_convolution([1, 0, 1], [1, 1], [1, 3]) == {1: 1, 3: 1}
    ident = [[1 if r == c else 0 for c in range(4)] for r in range(4)]
    b = [[r + c for c in range(4)] for r in range(4)]
    got = fgl.partial_matmul(ident, b, [(2, 3), (0, 0)])
    assert got == {(2, 3): 5, (0, 0): 0}
    convs = fgl.leaf_conv_via_matmul([1, 0, 1], [[1, 0, 0], [1, 0, 0], [0, 0, 0]])
    assert convs[0] == [1, 1, 1, 1, 0]
