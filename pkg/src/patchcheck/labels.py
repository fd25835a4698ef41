"""The binary outcome shared by ground-truth labels and classifier verdicts."""

from enum import Enum


class Correctness(str, Enum):
    CORRECT = "correct"
    OVERFITTING = "overfitting"

    @classmethod
    def parse(cls, text: str) -> "Correctness":
        return cls(text.strip().lower())
