import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadent.errors import ZeroVector
from quadent.ketlang import (
    Diff,
    Ket,
    KetSyntaxError,
    MixedArity,
    Paren,
    Scale,
    Sum,
    Tensor,
    evaluate,
    ket_state,
    parse,
    pretty,
)
from quadent.qcore import equal_up_to_global_phase
from quadent.statelib import named_states, reference_registry


class TestParse:
    def test_single_ket(self):
        assert parse("|0101>") == Ket("0101")
        assert parse("|0101⟩") == Ket("0101")

    def test_precedence(self):
        # tensor binds tighter than addition
        tree = parse("|0>(x)|1> + |1>(x)|0>")
        assert isinstance(tree, Sum)
        assert isinstance(tree.left, Tensor) and isinstance(tree.right, Tensor)

    def test_tensor_spellings(self):
        expect = parse("|0> (x) |1>")
        assert parse("|0>⊗|1>") == expect
        assert parse("|0> x |1>") == expect
        assert parse("|0>( x )|1>") == expect

    def test_suffix_division(self):
        tree = parse("(|0>-|1>)/2^(1/2)")
        assert isinstance(tree, Scale) and tree.divide
        assert isinstance(tree.expr, Paren) and isinstance(tree.expr.expr, Diff)

    def test_whitespace_insignificant(self):
        assert parse(" ( |00> +\n|11> ) / 2 ^ ( 1 / 2 ) ") == parse("(|00>+|11>)/2^(1/2)")

    def test_bytes_input(self):
        assert parse("|0>⊗|1>".encode()) == parse("|0>(x)|1>")


class TestScalars:
    @pytest.mark.parametrize(
        "text, value",
        [
            ("2^(1/2)|0>", np.sqrt(2)),
            ("2^{1/2}|0>", np.sqrt(2)),
            ("sqrt(2)|0>", np.sqrt(2)),
            ("√3|0>", np.sqrt(3)),
            ("i|0>", 1j),
            ("-i|0>", -1j),
            ("0.6|0>", 0.6),
            ("1/2|0>", 0.5),
            ("3*i/2|0>", 1.5j),
            ("8^(-1/2)|0>", 1 / np.sqrt(8)),
            ("2^3|0>", 8.0),
            ("|0>/2^(1/2)/3", 1 / (3 * np.sqrt(2))),
            ("sqrt(3/4)|0>", np.sqrt(0.75)),
        ],
    )
    def test_values(self, text, value):
        v = evaluate(parse(text), normalize=False)
        assert v.state.amps[0] == pytest.approx(value, abs=1e-15)
        assert v.prenorm == pytest.approx(abs(value), abs=1e-15)

    def test_exact_cancellation(self):
        # 2^(1/2)/2 and 1/2^(1/2) combine exactly before folding
        v = evaluate(parse("2^(1/2)/2|0> - |0>/2^(1/2) + |1>"), normalize=False)
        assert v.state.amps[0] == 0
        assert v.state.amps[1] == 1


class TestEvaluate:
    def test_normalizes(self):
        v = evaluate(parse("|00>+|11>"))
        np.testing.assert_allclose(v.state.amps, [2**-0.5, 0, 0, 2**-0.5])
        assert v.prenorm == pytest.approx(np.sqrt(2))

    def test_raw_tagged(self):
        s = ket_state("|0>+|1>", normalize=False)
        assert not s.normalized
        assert ket_state("(|0>+|1>)/2^(1/2)", normalize=False).normalized

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            ket_state("|01>-|01>")

    def test_qubit_order(self):
        # first character is qubit 1, the most significant bit
        assert ket_state("|1>(x)|0>").amps[0b10] == 1

    def test_against_kron(self):
        a = np.array([1, 1j]) / np.sqrt(2)
        b = np.array([3, -4]) / 5
        expect = np.kron(a, b)
        s = ket_state("(|0>+i|1>)/sqrt(2) ⊗ (3|0>-4|1>)/5")
        np.testing.assert_allclose(s.amps, expect, atol=1e-15)

    @pytest.mark.parametrize("row", reference_registry(), ids=lambda r: r.id)
    def test_table_rows(self, row):
        s = ket_state(row.ket)
        assert np.max(np.abs(s.amps - row.state().amps)) <= 1e-12

    def test_named_states(self):
        for name, ns in named_states().items():
            assert equal_up_to_global_phase(ket_state(ns.ket), ns.state())[0], name


class TestErrors:
    @pytest.mark.parametrize(
        "text, offset",
        [
            ("|01>+|1>", 4),
            ("|2>", 1),
            ("(|0>", 4),
            ("", 0),
            ("|0>)", 3),
            ("|01", 3),
            ("2^(1/3)|0>", 7),
            ("|0> $", 4),
        ],
    )
    def test_offsets(self, text, offset):
        with pytest.raises(KetSyntaxError) as info:
            parse(text)
        assert info.value.offset == offset

    def test_mixed_arity_is_syntax_error(self):
        with pytest.raises(MixedArity):
            parse("(|0>+|1>)(x)|0> - |00>+|1>")
        assert issubclass(MixedArity, KetSyntaxError)

    def test_byte_offset_counts_utf8(self):
        # "⊗" is three bytes
        with pytest.raises(KetSyntaxError) as info:
            parse("|0>⊗|1> + |0>")
        assert info.value.offset == len("|0>⊗|1> ".encode())

    def test_expected_set(self):
        with pytest.raises(KetSyntaxError) as info:
            parse("2 *")
        assert "NUMBER" in info.value.expected

    def test_deep_nesting(self):
        with pytest.raises(KetSyntaxError):
            parse("(" * 500 + "|0>" + ")" * 500)

    def test_division_by_zero(self):
        with pytest.raises(ZeroVector):
            ket_state("|0>/0")

    def test_invalid_utf8(self):
        with pytest.raises(KetSyntaxError):
            parse(b"|0>\xff")


class TestRoundTrip:
    @pytest.mark.parametrize("unicode", [False, True])
    def test_registry(self, unicode):
        for ns in named_states().values():
            tree = parse(ns.ket)
            assert parse(pretty(tree, unicode=unicode)) == tree


# well-formed expressions built from the grammar
divisors = st.sampled_from(["2", "i", "sqrt(2)", "2^(1/2)", "√3", "0.5", "3^{-1/2}", "2*i"])
scalars = st.one_of(divisors, st.sampled_from(["1/2", "-i", "-2^(1/2)/3"]))


@st.composite
def expressions(draw, depth=0):
    n = draw(st.integers(1, 3))
    if depth > 2 or draw(st.booleans()):
        base = "|" + draw(st.text("01", min_size=n, max_size=n)) + ">"
        return draw(st.sampled_from(["", draw(scalars)])) + base, n
    left, k = draw(expressions(depth + 1))
    kind = draw(st.sampled_from(["+", "-", "(x)", "/", "()"]))
    if kind in "+-":
        right = "|" + draw(st.text("01", min_size=k, max_size=k)) + ">"
        return f"{left}{kind}{right}", k
    if kind == "(x)":
        right, k2 = draw(expressions(depth + 1))
        return f"({left}) (x) ({right})", k + k2
    if kind == "/":
        return f"({left})/{draw(divisors)}", k
    return f"({left})", k


class TestFuzz:
    @settings(max_examples=300, deadline=None)
    @given(st.text(max_size=1024))
    def test_arbitrary_text(self, text):
        try:
            tree = parse(text)
        except KetSyntaxError as exc:
            assert 0 <= exc.offset <= len(text.encode("utf-8", "surrogatepass"))
            return
        try:
            evaluate(tree)
        except ZeroVector:
            pass

    @settings(max_examples=300, deadline=None)
    @given(st.text(alphabet="|01>()+-x/^{}*i√sqrt2.3 ", max_size=1024))
    def test_grammar_alphabet(self, text):
        try:
            evaluate(parse(text))
        except (KetSyntaxError, ZeroVector):
            pass

    @settings(max_examples=200, deadline=None)
    @given(expressions())
    def test_generated_round_trip(self, drawn):
        text, n = drawn
        tree = parse(text)
        assert parse(pretty(tree)) == tree
        assert parse(pretty(tree, unicode=True)) == tree
        try:
            a = evaluate(tree).state
        except ZeroVector:
            return
        assert a.n_qubits == n
        b = evaluate(parse(pretty(tree))).state
        np.testing.assert_allclose(a.amps, b.amps, atol=1e-12)
