import itertools
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shuffleword import catalog
from shuffleword.catalog import G, H, H_PRIME
from shuffleword.errors import (
    ExhaustedStream,
    InvalidInput,
    InvalidMorphism,
    MemoryBudgetExceeded,
    NotInImage,
)
from shuffleword.words import (
    FixedPoint,
    Image,
    Morphism,
    apply_morphism,
    compose,
    constant,
    decode_bifix,
    find_occurrence,
    finite,
    fixed_point_prefix,
    is_bifix_code,
    is_factor_of,
    periodic,
    prepend,
    shift,
    to_str,
    word,
)

from conftest import G_RULES, H_RULES
from oracles import expand, find_naive


def test_word_roundtrip():
    assert word("0121") == b"\x00\x01\x02\x01"
    assert to_str(word("0121")) == "0121"
    assert word("10 11 3") == bytes([10, 11, 3])
    assert to_str(bytes([10, 2])) == "10 2"
    with pytest.raises(InvalidInput):
        word("01a")


class TestApply:
    def test_letter(self):
        assert to_str(apply_morphism(G, word("0"))) == "0121"

    def test_empty(self):
        assert apply_morphism(G, b"") == b""

    def test_square_in_image(self):
        assert to_str(G(word("23"))) == "0130302"

    def test_length_is_sum_of_images(self):
        w = word("0123321")
        assert len(G(w)) == sum(len(G[a]) for a in w)

    def test_letter_outside_domain(self):
        with pytest.raises(InvalidInput):
            H(word("3"))


class TestCompose:
    def test_hp_after_h(self):
        m = compose(H_PRIME, H)
        assert [to_str(im) for im in m.images] == ["210201", "2101", "20"]

    def test_h_after_hp(self):
        assert to_str(compose(H, H_PRIME)[0]) == "102012"

    def test_identity(self):
        assert compose(Morphism.identity(3), H) == H

    def test_mismatch(self):
        with pytest.raises(InvalidInput):
            compose(H, G)

    def test_power(self):
        assert [to_str(im) for im in H.power(2).images] == ["012021", "0121", "02"]


class TestMorphismText:
    def test_parse_comments_and_blanks(self):
        text = "# the morphism g\n0 -> 0121\n\n1 -> 032  # tail\n2 -> 013\n3 -> 0302\n"
        assert Morphism.parse(text) == G

    def test_dumps_roundtrip(self):
        for m in (G, H, H_PRIME):
            assert Morphism.parse(m.dumps()) == m

    def test_inferred_codomain(self):
        m = Morphism.parse("0 -> 01\n1 -> 2\n")
        assert m.domain == 2 and m.codomain == 3

    @pytest.mark.parametrize(
        "text",
        ["", "0 -> 01\n0 -> 1\n", "0 01\n", "1 -> 0\n", "x -> 0\n", "0 -> 0a\n"],
    )
    def test_rejects(self, text):
        with pytest.raises(InvalidInput):
            Morphism.parse(text)

    def test_load(self, tmp_path):
        p = tmp_path / "h.txt"
        p.write_text("0 -> 012\n1 -> 02\n2 -> 1\n")
        assert Morphism.load(p) == H


class TestFixedPoint:
    def test_one_step(self):
        assert to_str(fixed_point_prefix(G, 0, 4)) == "0121"

    def test_double_expansion(self):
        assert to_str(fixed_point_prefix(G, 0, 13)) == expand(G_RULES, "0", 2)
        assert to_str(fixed_point_prefix(G, 0, 13)) == "0121032013032"

    def test_hall(self):
        assert to_str(fixed_point_prefix(H, 0, 12)) == "012021012102"

    def test_matches_iterated_expansion(self):
        ref = expand(H_RULES, "0", 14)
        assert to_str(fixed_point_prefix(H, 0, len(ref))) == ref

    def test_not_prolongable(self):
        with pytest.raises(InvalidMorphism):
            FixedPoint(H, 1)
        with pytest.raises(InvalidMorphism):
            fixed_point_prefix(Morphism.from_strings("1", "0"), 0, 3)

    def test_fixed_point_law(self, gfix):
        for n in range(0, 400, 7):
            p = gfix.prefix(n)
            assert G(p).startswith(p)


class TestStreams:
    def test_prefix(self, hall):
        assert to_str(hall.prefix(6)) == "012021"
        assert hall.prefix(0) == b""

    def test_shift(self, hall):
        assert to_str(shift(hall, 1).prefix(5)) == "12021"
        assert to_str(shift(hall, 3).prefix(6)) == "021012"
        assert shift(hall, 0).prefix(100) == hall.prefix(100)

    def test_shift_of_hall3(self, hall):
        h3 = catalog.word("hall-3")
        assert to_str(h3.prefix(7)) == "3012021"
        assert shift(h3, 1).prefix(3000) == hall.prefix(3000)

    @pytest.mark.parametrize("name", catalog.WORD_NAMES)
    def test_prefix_monotone(self, name):
        s = catalog.word(name)
        prev = b""
        for n in range(0, 301):
            cur = s.prefix(n)
            assert len(cur) == n and cur.startswith(prev)
            prev = cur
        assert s.prefix(5000)[:300] == prev
        assert s.prefix(300) == prev

    @pytest.mark.parametrize("a,b", [(0, 5), (3, 4), (7, 0), (11, 13)])
    def test_shift_composition(self, hall, a, b):
        assert shift(shift(hall, a), b).prefix(1000) == shift(hall, a + b).prefix(1000)

    def test_image_stream(self, hall):
        img = Image(H_PRIME, hall)
        assert img.prefix(500) == H_PRIME(hall.prefix(500))[:500]

    def test_periodic_and_constant(self):
        assert to_str(periodic("0110").prefix(10)) == "0110011001"
        assert constant(3).prefix(4) == b"\x03" * 4

    def test_prepend(self, hall):
        assert prepend("21", hall).prefix(10000) == word("21") + hall.prefix(9998)

    def test_finite_exhausts(self):
        f = finite("012")
        assert f.prefix(3) == word("012")
        with pytest.raises(ExhaustedStream):
            f.prefix(4)

    def test_getitem(self, hall):
        assert [hall[i] for i in range(6)] == list(word("012021"))
        with pytest.raises(IndexError):
            hall[-1]

    def test_concurrent_readers_agree(self):
        s = catalog.word("ternary-sf")
        results = []

        def read(n):
            results.append(s.prefix(n))

        threads = [threading.Thread(target=read, args=(n,)) for n in (50_000, 20_000, 80_000, 1, 65_000) * 4]
        for th in threads:
            th.start()
        for th in threads:
            th.join()
        full = s.prefix(80_000)
        assert all(full.startswith(r) for r in results)
        assert catalog.word("ternary-sf").prefix(80_000) == full

    def test_memory_cap(self, monkeypatch):
        monkeypatch.setenv("SHUFFLEWORD_MAX_MEM_MB", "0.01")
        s = catalog.word("hall")
        assert len(s.prefix(5000)) == 5000
        with pytest.raises(MemoryBudgetExceeded):
            s.prefix(50_000)


class TestFactorSearch:
    def test_examples(self, hall):
        assert find_occurrence(hall, word("012"), 1, 100).position == 6
        assert find_occurrence(hall, word("0"), 0, 100).position == 0
        assert find_occurrence(hall, word("11"), 0, 10_000) is None

    def test_limit_bounds_the_match(self, hall):
        # "012" at 6 ends at 9
        assert find_occurrence(hall, word("012"), 1, 8) is None
        assert find_occurrence(hall, word("012"), 1, 9).position == 6

    def test_precondition(self, hall):
        with pytest.raises(InvalidInput):
            find_occurrence(hall, word("012"), 5, 6)

    def test_is_factor(self, hall, gfix):
        assert is_factor_of(word("021"), hall, 100)
        assert is_factor_of(b"", hall, 0)
        assert not is_factor_of(word("33"), gfix, 10_000)

    @pytest.mark.parametrize("name", catalog.WORD_NAMES)
    def test_agrees_with_naive_scan(self, name):
        s = catalog.word(name)
        hay = to_str(s.prefix(2000))
        needles = {hay[p:p + ln] for p in range(0, 1500, 97) for ln in (1, 2, 3, 5, 8)}
        needles |= {"11", "00", "33", "0120", "2102"}
        for needle in sorted(needles):
            for start in (0, 1, 17, 600):
                occ = find_occurrence(s, word(needle), start, 2000)
                assert (occ.position if occ else None) == find_naive(hay, needle, start)


class TestDecode:
    def test_examples(self):
        assert to_str(decode_bifix(word("0121032"), G)) == "01"
        assert decode_bifix(b"", G) == b""

    def test_not_in_image(self):
        with pytest.raises(NotInImage):
            decode_bifix(word("012"), G)

    def test_not_bifix(self):
        assert is_bifix_code(G.images)
        assert is_bifix_code(H.images)
        m = Morphism.from_strings("0", "01", "21")
        assert not is_bifix_code(m.images)
        with pytest.raises(InvalidMorphism):
            decode_bifix(word("01"), m)

    def test_roundtrip_small(self):
        for n in range(6):
            for u in itertools.product(range(4), repeat=n):
                u = bytes(u)
                assert decode_bifix(G(u), G) == u

    @settings(max_examples=200)
    @given(st.binary(max_size=300).map(lambda b: bytes(c % 4 for c in b)))
    def test_roundtrip_random(self, u):
        w = G(u)
        assert decode_bifix(w, G) == u
        assert G(decode_bifix(w, G)) == w
