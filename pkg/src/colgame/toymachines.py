"""A small catalog of two-counter machines with ground-truth annotations.

Programs are lists of lines, one instruction each, optionally preceded
by a ``label:`` marker:

    INC r        increment counter r (r is 0 or 1)
    DEC r        decrement counter r, staying at zero
    JZ r,label   jump to label when counter r is zero
    ACCEPT       halt and accept
    REJECT       halt and reject
    OUTPUT n     set the result value to the numeral n and continue

The input is loaded into counter 0; falling off the end halts rejecting.
Each machine carries annotation tables for halting and acceptance per
input, plus its output on input 0.  The annotations are the ground
truth that interpretations consult; bounded execution must never
contradict them on the inputs they cover.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


class ProgramError(ValueError):
    """Raised for programs the instruction set cannot express."""


@dataclass(frozen=True)
class Halted:
    accepted: bool
    output: Optional[int] = None


@dataclass(frozen=True)
class StillRunning:
    pass


ToyResult = Union[Halted, StillRunning]


def compile_program(lines):
    """Resolve labels and parse instructions; raises ProgramError."""
    labels = {}
    bodies = []
    for line in lines:
        text = line.strip()
        label = None
        if ":" in text:
            label, text = text.split(":", 1)
            label = label.strip()
            text = text.strip()
            if not label or not label.replace("_", "").isalnum():
                raise ProgramError(f"bad label in line {line!r}")
        if label is not None:
            if label in labels:
                raise ProgramError(f"duplicate label {label!r}")
            labels[label] = len(bodies)
        bodies.append(text)

    def register(token: str) -> int:
        if token not in ("0", "1"):
            raise ProgramError(f"bad register {token!r}: only counters 0 and 1 exist")
        return int(token)

    compiled = []
    for text in bodies:
        parts = text.replace(",", " ").split()
        if not parts:
            raise ProgramError("empty instruction line")
        op, args = parts[0], parts[1:]
        if op == "INC" and len(args) == 1:
            compiled.append(("INC", register(args[0])))
        elif op == "DEC" and len(args) == 1:
            compiled.append(("DEC", register(args[0])))
        elif op == "JZ" and len(args) == 2:
            compiled.append(("JZ", register(args[0]), args[1]))
        elif op == "ACCEPT" and not args:
            compiled.append(("ACCEPT",))
        elif op == "REJECT" and not args:
            compiled.append(("REJECT",))
        elif op == "OUTPUT" and len(args) == 1 and args[0].isdigit():
            compiled.append(("OUTPUT", int(args[0])))
        else:
            raise ProgramError(f"cannot parse instruction {text!r}")
    resolved = []
    for instr in compiled:
        if instr[0] == "JZ":
            if instr[2] not in labels:
                raise ProgramError(f"unknown label {instr[2]!r}")
            resolved.append(("JZ", instr[1], labels[instr[2]]))
        else:
            resolved.append(instr)
    return resolved


@dataclass
class InputTable:
    """input -> bool, with a default for inputs not listed."""

    default: bool = False
    overrides: dict = field(default_factory=dict)

    def lookup(self, value: int) -> bool:
        return self.overrides.get(value, self.default)

    @staticmethod
    def from_dict(doc: dict) -> "InputTable":
        return InputTable(
            default=bool(doc.get("default", False)),
            overrides={int(k): bool(v) for k, v in doc.get("by_input", {}).items()},
        )

    def to_dict(self) -> dict:
        doc = {"default": self.default}
        if self.overrides:
            doc["by_input"] = {str(k): v for k, v in sorted(self.overrides.items())}
        return doc


@dataclass
class ToyMachine:
    id: int
    program: list
    halts_table: InputTable
    accepts_table: InputTable
    output_on_0: Optional[int] = None

    def __post_init__(self):
        self.compiled = compile_program(self.program)


def run_program(compiled, input_value: int, budget: int) -> ToyResult:
    """Execute a compiled program for at most ``budget`` instructions."""
    c = [input_value, 0]
    pc = 0
    output: Optional[int] = None
    end = len(compiled)
    for _ in range(budget):
        if pc >= end:
            return Halted(False, output)
        instr = compiled[pc]
        op = instr[0]
        if op == "INC":
            c[instr[1]] += 1
        elif op == "DEC":
            if c[instr[1]]:
                c[instr[1]] -= 1
        elif op == "JZ":
            if c[instr[1]] == 0:
                pc = instr[2]
                continue
        elif op == "OUTPUT":
            output = instr[1]
        elif op == "ACCEPT":
            return Halted(True, output)
        else:  # REJECT
            return Halted(False, output)
        pc += 1
    return StillRunning()


@dataclass
class Catalog:
    machines: list

    def __post_init__(self):
        for i, machine in enumerate(self.machines):
            if machine.id != i:
                raise ProgramError(f"catalog ids must be dense from 0; found {machine.id} at {i}")
        if not any(self._never_halts(m) for m in self.machines):
            raise ProgramError("catalog needs at least one machine that loops forever")
        if not any(m.accepts_table.default or any(m.accepts_table.overrides.values())
                   for m in self.machines):
            raise ProgramError("catalog needs at least one accepting machine")
        if not any(self._halts_somewhere(m) and not m.accepts_table.default
                   and not any(m.accepts_table.overrides.values())
                   for m in self.machines):
            raise ProgramError("catalog needs at least one rejecting machine")

    @staticmethod
    def _never_halts(m: ToyMachine) -> bool:
        return not m.halts_table.default and not any(m.halts_table.overrides.values())

    @staticmethod
    def _halts_somewhere(m: ToyMachine) -> bool:
        return m.halts_table.default or any(m.halts_table.overrides.values())

    def __len__(self) -> int:
        return len(self.machines)

    def halts(self, machine_id: int, input_value: int) -> bool:
        if not 0 <= machine_id < len(self.machines):
            return False
        return self.machines[machine_id].halts_table.lookup(input_value)

    def accepts(self, machine_id: int, input_value: int) -> bool:
        if not 0 <= machine_id < len(self.machines):
            return False
        return self.machines[machine_id].accepts_table.lookup(input_value)

    def output_on_0(self, machine_id: int) -> Optional[int]:
        if not 0 <= machine_id < len(self.machines):
            return None
        return self.machines[machine_id].output_on_0

    def minimal_producer(self, value: int) -> Optional[int]:
        """The smallest machine id whose output on input 0 is ``value``."""
        for machine in self.machines:
            if machine.output_on_0 == value:
                return machine.id
        return None

    def outputs(self) -> set:
        return {m.output_on_0 for m in self.machines if m.output_on_0 is not None}

    @staticmethod
    def from_list(docs: list) -> "Catalog":
        machines = [
            ToyMachine(
                id=int(doc["id"]),
                program=list(doc["program"]),
                halts_table=InputTable.from_dict(doc.get("halts_table", {})),
                accepts_table=InputTable.from_dict(doc.get("accepts_table", {})),
                output_on_0=doc.get("output_on_0"),
            )
            for doc in docs
        ]
        return Catalog(machines)

    def to_list(self) -> list:
        return [
            {
                "id": m.id,
                "program": list(m.program),
                "halts_table": m.halts_table.to_dict(),
                "accepts_table": m.accepts_table.to_dict(),
                "output_on_0": m.output_on_0,
            }
            for m in self.machines
        ]


def toy_run(catalog: Catalog, machine_id: int, input_value: int, budget: int) -> ToyResult:
    """Run a catalog machine on an input for at most ``budget`` steps."""
    if not 0 <= machine_id < len(catalog.machines):
        raise KeyError(f"no machine with id {machine_id}")
    return run_program(catalog.machines[machine_id].compiled, input_value, budget)


def default_catalog() -> Catalog:
    """The ten-machine catalog the library ships with.

    Outputs on input 0 cover the values 0..5, machine 8 duplicates the
    output of machine 4 (so minimal-producer lookups have something to
    disambiguate), machine 1 loops on every input, and machines 8 and 9
    are the input-dependent ones.
    """
    always = InputTable(default=True)
    never = InputTable(default=False)

    def table(default: bool, **at) -> InputTable:
        return InputTable(default=default, overrides={int(k): v for k, v in at.items()})

    machines = [
        ToyMachine(0, ["ACCEPT"], always, always, None),
        ToyMachine(1, ["loop: JZ 1,loop"], never, never, None),
        ToyMachine(2, ["OUTPUT 0", "ACCEPT"], always, always, 0),
        ToyMachine(3, ["REJECT"], always, never, None),
        ToyMachine(4, ["OUTPUT 1", "ACCEPT"], always, always, 1),
        ToyMachine(5, ["OUTPUT 2", "REJECT"], always, never, 2),
        ToyMachine(
            6,
            ["loop: JZ 0,done", "DEC 0", "JZ 1,loop", "done: OUTPUT 3", "ACCEPT"],
            always,
            always,
            3,
        ),
        ToyMachine(7, ["OUTPUT 4", "ACCEPT"], always, always, 4),
        ToyMachine(
            8,
            [
                "JZ 0,acc",
                "DEC 0",
                "JZ 0,acc",
                "DEC 0",
                "JZ 0,acc",
                "spin: JZ 1,spin",
                "acc: OUTPUT 1",
                "ACCEPT",
            ],
            table(False, **{"0": True, "1": True, "2": True}),
            table(False, **{"0": True, "1": True, "2": True}),
            1,
        ),
        ToyMachine(
            9,
            ["JZ 0,acc", "REJECT", "acc: OUTPUT 5", "ACCEPT"],
            always,
            table(False, **{"0": True}),
            5,
        ),
    ]
    return Catalog(machines)
