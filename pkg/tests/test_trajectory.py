import pytest
from hypothesis import given, strategies as st

from metaseg.errors import InvariantViolation, UnknownLetter
from metaseg.trajectory import (
    ALPHABET,
    INTERACTIONS,
    ActionString,
    ActionTrajectory,
    LowLevelAction as A,
    decode_letter,
    encode_actions,
)


def traj(actions, index=None, n_sub=1, **kw):
    if index is None:
        index = [0] * len(actions)
    return ActionTrajectory("goal", [f"s{k}" for k in range(n_sub)], actions, index, **kw)


def test_twelve_actions_six_letters():
    assert len(A) == 12
    assert {a.letter for a in A} == set(ALPHABET)
    assert len(INTERACTIONS) == 7
    assert all(a.letter == "i" for a in INTERACTIONS)


@pytest.mark.parametrize(
    "actions, expected",
    [
        ([A.MoveAhead] * 3, "mmm"),
        ([], ""),
        ([A.PickupObject, A.SliceObject, A.PutObject], "iii"),
        ([A.RotateLeft, A.MoveAhead, A.MoveAhead, A.RotateRight], "lmmr"),
        ([A.LookUp, A.LookDown, A.RotateRight], "udr"),
    ],
)
def test_encode(actions, expected):
    assert encode_actions(traj(actions)) == expected
    assert encode_actions(actions) == expected


def test_decode():
    assert decode_letter("m") == {A.MoveAhead}
    assert decode_letter("i") == INTERACTIONS
    with pytest.raises(UnknownLetter):
        decode_letter("x")
    with pytest.raises(UnknownLetter):
        decode_letter("mm")


@given(st.lists(st.sampled_from(list(A)), max_size=40))
def test_round_trip_and_length(actions):
    letters = encode_actions(actions)
    assert len(letters) == len(actions)
    for a, ch in zip(actions, letters):
        assert a in decode_letter(ch)


def test_action_string_rejects_foreign_letters():
    assert ActionString("mrludi") == "mrludi"
    with pytest.raises(UnknownLetter):
        ActionString("mM")


def test_trajectory_invariants():
    ok = traj([A.MoveAhead, A.PickupObject, A.MoveAhead], [0, 0, 1], n_sub=2,
              poses=[(0, 0)] * 4)
    assert len(ok) == 3
    with pytest.raises(InvariantViolation, match="decreases"):
        traj([A.MoveAhead, A.MoveAhead], [1, 0], n_sub=2)
    with pytest.raises(InvariantViolation, match="outside"):
        traj([A.MoveAhead], [1], n_sub=1)
    with pytest.raises(InvariantViolation, match="length"):
        traj([A.MoveAhead], [0, 0])
    with pytest.raises(InvariantViolation, match="poses"):
        traj([A.MoveAhead], poses=[(0, 0)])


def test_empty_trajectory_is_legal():
    t = ActionTrajectory("goal", [], [], [])
    assert encode_actions(t) == ""
