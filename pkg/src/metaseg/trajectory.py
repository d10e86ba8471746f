"""Low-level actions, episodes and the one-letter action encoding."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InvariantViolation, UnknownLetter

ALPHABET = "mrludi"


class LowLevelAction(str, enum.Enum):
    MoveAhead = "MoveAhead"
    RotateRight = "RotateRight"
    RotateLeft = "RotateLeft"
    LookUp = "LookUp"
    LookDown = "LookDown"
    PickupObject = "PickupObject"
    PutObject = "PutObject"
    ToggleObjectOn = "ToggleObjectOn"
    ToggleObjectOff = "ToggleObjectOff"
    CloseObject = "CloseObject"
    OpenObject = "OpenObject"
    SliceObject = "SliceObject"

    @property
    def letter(self) -> str:
        return LETTER_OF[self]

    @property
    def is_interaction(self) -> bool:
        return LETTER_OF[self] == "i"


LETTER_OF = {
    LowLevelAction.MoveAhead: "m",
    LowLevelAction.RotateRight: "r",
    LowLevelAction.RotateLeft: "l",
    LowLevelAction.LookUp: "u",
    LowLevelAction.LookDown: "d",
    LowLevelAction.PickupObject: "i",
    LowLevelAction.PutObject: "i",
    LowLevelAction.ToggleObjectOn: "i",
    LowLevelAction.ToggleObjectOff: "i",
    LowLevelAction.CloseObject: "i",
    LowLevelAction.OpenObject: "i",
    LowLevelAction.SliceObject: "i",
}

INTERACTIONS = frozenset(a for a, c in LETTER_OF.items() if c == "i")

_ACTIONS_OF = {
    c: frozenset(a for a, x in LETTER_OF.items() if x == c) for c in ALPHABET
}


class ActionString(str):
    """A ``str`` restricted to the six action letters."""

    def __new__(cls, letters: str = ""):
        for ch in letters:
            if ch not in ALPHABET:
                raise UnknownLetter(ch)
        return super().__new__(cls, letters)


@dataclass(frozen=True)
class ActionTrajectory:
    goal_text: str
    sub_goals: tuple
    actions: tuple
    subgoal_index: tuple
    poses: Optional[tuple] = None
    goal_conditions: Optional[tuple] = None

    def __post_init__(self):
        # normalize sequences to tuples so instances hash and compare by value
        object.__setattr__(self, "sub_goals", tuple(self.sub_goals))
        object.__setattr__(self, "actions", tuple(LowLevelAction(a) for a in self.actions))
        object.__setattr__(self, "subgoal_index", tuple(int(i) for i in self.subgoal_index))
        if self.poses is not None:
            object.__setattr__(
                self, "poses", tuple((float(p[0]), float(p[1])) for p in self.poses)
            )
        if self.goal_conditions is not None:
            object.__setattr__(
                self, "goal_conditions", tuple(bool(g) for g in self.goal_conditions)
            )
        self.validate()

    def validate(self):
        T, N = len(self.actions), len(self.sub_goals)
        if len(self.subgoal_index) != T:
            raise InvariantViolation(
                f"subgoal_index has length {len(self.subgoal_index)}, expected {T}"
            )
        prev = 0
        for t, k in enumerate(self.subgoal_index):
            if k < 0 or k >= N:
                raise InvariantViolation(f"subgoal_index[{t}]={k} outside [0, {N})")
            if k < prev:
                raise InvariantViolation(f"subgoal_index decreases at step {t}")
            prev = k
        if self.poses is not None and len(self.poses) != T + 1:
            raise InvariantViolation(
                f"poses has length {len(self.poses)}, expected {T + 1}"
            )

    def __len__(self):
        return len(self.actions)


def encode_actions(traj: ActionTrajectory | Sequence[LowLevelAction]) -> ActionString:
    """Letter string of a trajectory; the seven interactions all become ``i``."""
    actions = traj.actions if isinstance(traj, ActionTrajectory) else traj
    return ActionString("".join(LETTER_OF[LowLevelAction(a)] for a in actions))


def decode_letter(letter: str) -> frozenset:
    try:
        return _ACTIONS_OF[letter]
    except (KeyError, TypeError):
        raise UnknownLetter(letter) from None
