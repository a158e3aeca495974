// Pure view-state derivations.  Everything here is a function of the
// latest service snapshot (plus the formula text the session was opened
// with); nothing adjudicates.  Verdicts, hints, and legality all come
// from the service verbatim.

import { FormulaNode } from "./formula.js";
import { PlayerName, RunEntry, SessionStatus } from "./protocol.js";

export interface Banner {
  tone: "info" | "win" | "loss" | "warn" | "error";
  text: string;
}

export function bannerFor(status: SessionStatus, lastMachineMoves: string[]): Banner {
  if (status.state === "RUNNING") {
    if (lastMachineMoves.length > 0) {
      return { tone: "info", text: `⊤ played ${lastMachineMoves.join(" ")} — your move` };
    }
    return { tone: "info", text: "your move (you play ⊥)" };
  }
  if (status.winner === "T") {
    if (status.offender === "B") return { tone: "loss", text: "⊤ wins (your move was illegal)" };
    return { tone: "win", text: "⊤ wins" };
  }
  if (status.offender === "T") return { tone: "loss", text: "⊥ wins (the machine moved illegally)" };
  return { tone: "win", text: "⊥ wins — you win" };
}

// Free-text entry is open-ended (hints are a bounded enumeration, the
// move space is not), so a move outside the hint list warns first and
// goes through on a repeated submit.  Hint clicks send directly.
export type SubmitDecision = { action: "send"; move: string } | { action: "warn"; move: string; message: string };

export function decideSubmit(entry: string, hints: string[], pendingConfirm: string | null): SubmitDecision {
  const move = entry.trim() === "" ? "_" : entry.trim();
  if (hints.includes(move) || pendingConfirm === move) {
    return { action: "send", move };
  }
  return {
    action: "warn",
    move,
    message: `"${move}" is not among the enumerated legal moves; submit again to send it anyway`,
  };
}

// ---------------------------------------------------------------------------
// Formula-tree activity markers.
//
// The tracker mirrors the formula shape and attributes each run move to
// a node: component prefixes ("0.", "1.", copy indices) peel off at
// parallel-style nodes, one bare token resolves a choice or quantifier,
// and the control tokens (s, +, -) tick the sequential and recurrence
// markers.  It is presentation only: moves that fit nowhere are dropped.

export interface ActivityNode {
  label: string;
  detail: string | null;
  active: boolean;
  children: ActivityNode[];
}

type Tracker =
  | { kind: "leaf"; label: string }
  | { kind: "neg"; body: Tracker }
  | { kind: "parallel"; op: string; left: Tracker; right: Tracker }
  | { kind: "choice"; op: string; resolved: "left" | "right" | null; left: Tracker; right: Tracker }
  | { kind: "quant"; op: "all" | "exi"; variable: string; pick: string | null; body: Tracker }
  | { kind: "seq"; op: "sand" | "sor"; owner: PlayerName; switched: boolean; left: Tracker; right: Tracker }
  | { kind: "prec"; bound: number | null; copies: Set<number>; body: Tracker }
  | { kind: "srec"; owner: PlayerName; starts: number; make: () => Tracker; body: Tracker }
  | { kind: "stack"; owner: PlayerName; pushes: number; make: () => Tracker; bodies: Tracker[] }
  | { kind: "tau"; bound: number; used: number; body: Tracker };

function buildTracker(node: FormulaNode, positive: boolean): Tracker {
  const owner = (positiveOwner: PlayerName): PlayerName =>
    positive ? positiveOwner : positiveOwner === "T" ? "B" : "T";
  switch (node.kind) {
    case "atom":
      return { kind: "leaf", label: node.args.length ? `${node.name}(${node.args.join(",")})` : node.name };
    case "const":
      return { kind: "leaf", label: node.name };
    case "neg":
      return { kind: "neg", body: buildTracker(node.body, !positive) };
    case "quant":
      return { kind: "quant", op: node.op, variable: node.variable, pick: null, body: buildTracker(node.body, positive) };
    case "prefix": {
      if (node.op === "prec") {
        return { kind: "prec", bound: node.bound, copies: new Set(), body: buildTracker(node.body, positive) };
      }
      if (node.op === "srec") {
        const make = () => buildTracker(node.body, positive);
        return { kind: "srec", owner: owner("B"), starts: 1, make, body: make() };
      }
      if (node.op === "stack") {
        const make = () => buildTracker(node.body, positive);
        return { kind: "stack", owner: owner("B"), pushes: 1, make, bodies: [make()] };
      }
      return { kind: "tau", bound: node.bound ?? 0, used: 0, body: buildTracker(node.body, positive) };
    }
    case "binary": {
      const { op } = node;
      if (op === "&" || op === "|") {
        return {
          kind: "choice",
          op,
          resolved: null,
          left: buildTracker(node.left, positive),
          right: buildTracker(node.right, positive),
        };
      }
      if (op === "sand" || op === "sor") {
        return {
          kind: "seq",
          op,
          owner: owner(op === "sor" ? "T" : "B"),
          switched: false,
          left: buildTracker(node.left, positive),
          right: buildTracker(node.right, positive),
        };
      }
      // parallel shapes; both implication forms negate their antecedent,
      // and >- additionally lets the environment stack antecedent copies
      const flipLeft = op === "->" || op === ">-";
      let left = buildTracker(node.left, flipLeft ? !positive : positive);
      if (op === ">-") {
        const make = () => buildTracker(node.left, !positive);
        left = { kind: "stack", owner: positive ? "B" : "T", pushes: 1, make, bodies: [make()] };
      }
      return { kind: "parallel", op, left, right: buildTracker(node.right, positive) };
    }
  }
}

const NUMERAL = /^(0|[1-9][0-9]*)$/;

function feed(tracker: Tracker, text: string, player: PlayerName): void {
  switch (tracker.kind) {
    case "leaf":
      return;
    case "neg":
      return feed(tracker.body, text, player);
    case "parallel": {
      if (text.startsWith("0.")) return feed(tracker.left, text.slice(2), player);
      if (text.startsWith("1.")) return feed(tracker.right, text.slice(2), player);
      return;
    }
    case "choice": {
      if (tracker.resolved === null) {
        if (text === "0") tracker.resolved = "left";
        if (text === "1") tracker.resolved = "right";
        return;
      }
      return feed(tracker.resolved === "left" ? tracker.left : tracker.right, text, player);
    }
    case "quant": {
      if (tracker.pick === null) {
        if (NUMERAL.test(text)) tracker.pick = text;
        return;
      }
      return feed(tracker.body, text, player);
    }
    case "seq": {
      if (text === "s" && player === tracker.owner && !tracker.switched) {
        tracker.switched = true;
        return;
      }
      return feed(tracker.switched ? tracker.right : tracker.left, text, player);
    }
    case "prec": {
      const dot = text.indexOf(".");
      if (dot > 0) {
        const index = text.slice(0, dot);
        if (NUMERAL.test(index)) tracker.copies.add(parseInt(index, 10));
      }
      return; // copies diverge, so no per-copy body markers
    }
    case "srec": {
      if (text === "s" && player === tracker.owner) {
        tracker.starts += 1;
        tracker.body = tracker.make(); // fresh copy, old one is abandoned
        return;
      }
      return feed(tracker.body, text, player);
    }
    case "stack": {
      if (player === tracker.owner && text === "+") {
        tracker.pushes += 1;
        tracker.bodies.push(tracker.make());
        return;
      }
      if (player === tracker.owner && text === "-") {
        if (tracker.bodies.length > 1) tracker.bodies.pop();
        return;
      }
      return feed(tracker.bodies[tracker.bodies.length - 1], text, player);
    }
    case "tau": {
      tracker.used += 1;
      return feed(tracker.body, text, player);
    }
  }
}

function render(tracker: Tracker, active: boolean): ActivityNode {
  switch (tracker.kind) {
    case "leaf":
      return { label: tracker.label, detail: null, active, children: [] };
    case "neg":
      return { label: "~", detail: null, active, children: [render(tracker.body, active)] };
    case "parallel":
      return {
        label: tracker.op,
        detail: null,
        active,
        children: [render(tracker.left, active), render(tracker.right, active)],
      };
    case "choice": {
      const detail = tracker.resolved === null ? null : tracker.resolved === "left" ? "chose left" : "chose right";
      return {
        label: tracker.op,
        detail,
        active,
        children: [
          render(tracker.left, active && tracker.resolved !== "right"),
          render(tracker.right, active && tracker.resolved !== "left"),
        ],
      };
    }
    case "quant":
      return {
        label: `${tracker.op} ${tracker.variable}.`,
        detail: tracker.pick === null ? null : `${tracker.variable} = ${tracker.pick}`,
        active,
        children: [render(tracker.body, active)],
      };
    case "seq":
      return {
        label: tracker.op,
        detail: tracker.switched ? "switched" : null,
        active,
        children: [
          render(tracker.left, active && !tracker.switched),
          render(tracker.right, active && tracker.switched),
        ],
      };
    case "prec": {
      const label = tracker.bound === null ? "prec" : `prec[${tracker.bound}]`;
      const copies = [...tracker.copies].sort((a, b) => a - b);
      return {
        label,
        detail: copies.length ? `copies ${copies.join(", ")}` : null,
        active,
        children: [render(tracker.body, active)],
      };
    }
    case "srec":
      return {
        label: "srec",
        detail: tracker.starts > 1 ? `copy ${tracker.starts}` : null,
        active,
        children: [render(tracker.body, active)],
      };
    case "stack":
      return {
        label: "stack",
        detail: tracker.pushes > 1 || tracker.bodies.length > 1 ? `depth ${tracker.bodies.length}` : null,
        active,
        children: [render(tracker.bodies[tracker.bodies.length - 1], active)],
      };
    case "tau":
      return {
        label: `tau[${tracker.bound}]`,
        detail: tracker.used ? `${tracker.used}/${tracker.bound} moves` : null,
        active,
        children: [render(tracker.body, active)],
      };
  }
}

export function annotate(formula: FormulaNode, run: RunEntry[]): ActivityNode {
  const tracker = buildTracker(formula, true);
  for (const entry of run) {
    feed(tracker, entry.move === "_" ? "" : entry.move, entry.player);
  }
  return render(tracker, true);
}
