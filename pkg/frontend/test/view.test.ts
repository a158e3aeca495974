import { describe, expect, it } from "vitest";

import { parseFormula } from "../src/formula.js";
import { parseRun } from "../src/protocol.js";
import { annotate, bannerFor, decideSubmit, ActivityNode } from "../src/view.js";

describe("bannerFor", () => {
  it("prompts while running", () => {
    expect(bannerFor({ state: "RUNNING" }, []).text).toBe("your move (you play ⊥)");
    expect(bannerFor({ state: "RUNNING" }, ["5"]).text).toBe("⊤ played 5 — your move");
  });

  it("announces a clean machine win", () => {
    const banner = bannerFor({ state: "FINISHED", winner: "T" }, []);
    expect(banner.text).toBe("⊤ wins");
    expect(banner.tone).toBe("win");
  });

  it("blames the illegal move", () => {
    expect(bannerFor({ state: "FINISHED", winner: "T", offender: "B" }, []).text).toBe(
      "⊤ wins (your move was illegal)",
    );
    expect(bannerFor({ state: "FINISHED", winner: "B", offender: "T" }, []).text).toBe(
      "⊥ wins (the machine moved illegally)",
    );
  });

  it("announces the human win", () => {
    expect(bannerFor({ state: "FINISHED", winner: "B" }, []).text).toBe("⊥ wins — you win");
  });
});

describe("decideSubmit", () => {
  it("sends a hinted move directly", () => {
    expect(decideSubmit("5", ["4", "5"], null)).toEqual({ action: "send", move: "5" });
  });

  it("maps blank entry to the empty move token", () => {
    expect(decideSubmit("  ", ["_"], null)).toEqual({ action: "send", move: "_" });
  });

  it("warns once for an unhinted move, then sends it", () => {
    const first = decideSubmit("99", ["0", "1"], null);
    expect(first.action).toBe("warn");
    const second = decideSubmit("99", ["0", "1"], "99");
    expect(second).toEqual({ action: "send", move: "99" });
  });

  it("does not let a stale confirmation leak onto another move", () => {
    expect(decideSubmit("98", ["0"], "99").action).toBe("warn");
  });
});

function annotated(formula: string, run: string): ActivityNode {
  return annotate(parseFormula(formula), parseRun(run));
}

describe("annotate", () => {
  it("marks a resolved choice and dims the road not taken", () => {
    const tree = annotated("P | ~P", "T:0");
    expect(tree.detail).toBe("chose left");
    expect(tree.children[0].active).toBe(true);
    expect(tree.children[1].active).toBe(false);
  });

  it("keeps both parallel components active", () => {
    const tree = annotated("P \\/ ~P", "");
    expect(tree.children.map((c) => c.active)).toEqual([true, true]);
  });

  it("records quantifier picks, outer then inner", () => {
    const tree = annotated("all x. exi y. Eq(y,x)", "B:5 T:5");
    expect(tree.detail).toBe("x = 5");
    expect(tree.children[0].detail).toBe("y = 5");
  });

  it("routes component prefixes before resolving inner choices", () => {
    const tree = annotated("(P & Q) \\/ TRUE", "B:0.1");
    expect(tree.children[0].detail).toBe("chose right");
    expect(tree.children[1].detail).toBeNull();
  });

  it("shows the sequential switch and flips the active component", () => {
    const fresh = annotated("P sand Q", "");
    expect(fresh.detail).toBeNull();
    expect(fresh.children[0].active).toBe(true);
    expect(fresh.children[1].active).toBe(false);

    const switched = annotated("P sand Q", "B:s");
    expect(switched.detail).toBe("switched");
    expect(switched.children[0].active).toBe(false);
    expect(switched.children[1].active).toBe(true);
  });

  it("flips switch ownership under negation", () => {
    // inside one negation the roles swap, so ⊥ owns the sor switch
    const tree = annotated("~(P sor Q)", "B:s");
    expect(tree.children[0].detail).toBe("switched");
    // and ⊤'s s is not a switch there
    const ignored = annotated("~(P sor Q)", "T:s");
    expect(ignored.children[0].detail).toBeNull();
  });

  it("collects opened recurrence copies", () => {
    const tree = annotated("prec (P & Q)", "B:0.1 B:2.0");
    expect(tree.detail).toBe("copies 0, 2");
  });

  it("counts restarts of a sequential recurrence", () => {
    expect(annotated("srec BIT", "B:1").detail).toBeNull();
    expect(annotated("srec BIT", "B:1 B:s").detail).toBe("copy 2");
  });

  it("tracks the stack depth through pushes and pops", () => {
    expect(annotated("stack BIT", "B:+").detail).toBe("depth 2");
    expect(annotated("stack BIT", "B:+ B:-").detail).toBe("depth 1");
  });

  it("counts moves against a tau budget", () => {
    expect(annotated("tau[3] BIT", "B:1 B:_").detail).toBe("2/3 moves");
  });

  it("drops moves that fit nowhere instead of failing", () => {
    expect(() => annotated("P & Q", "B:junk T:9.9")).not.toThrow();
  });
});
