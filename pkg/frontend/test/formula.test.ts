import { describe, expect, it } from "vitest";

import { atomNames, parseFormula, FormulaError, FormulaNode } from "../src/formula.js";

function binary(node: FormulaNode): Extract<FormulaNode, { kind: "binary" }> {
  if (node.kind !== "binary") throw new Error(`expected binary, got ${node.kind}`);
  return node;
}

describe("parseFormula", () => {
  it("parses atoms with and without arguments", () => {
    expect(parseFormula("P")).toEqual({ kind: "atom", name: "P", args: [] });
    expect(parseFormula("Eq(y,x)")).toEqual({ kind: "atom", name: "Eq", args: ["y", "x"] });
    expect(parseFormula("K(z,3)")).toEqual({ kind: "atom", name: "K", args: ["z", "3"] });
  });

  it("knows the reserved constants", () => {
    expect(parseFormula("TRUE").kind).toBe("const");
    expect(parseFormula("BIT")).toEqual({ kind: "const", name: "BIT" });
  });

  it("binds choice tighter than parallel tighter than sequential", () => {
    const tree = binary(parseFormula("P sor Q \\/ R & S"));
    expect(tree.op).toBe("sor");
    const right = binary(tree.right);
    expect(right.op).toBe("\\/");
    expect(binary(right.right).op).toBe("&");
  });

  it("keeps left associativity for choice", () => {
    const tree = binary(parseFormula("P & Q & R"));
    expect(tree.op).toBe("&");
    expect(binary(tree.left).op).toBe("&");
    expect(tree.right).toEqual({ kind: "atom", name: "R", args: [] });
  });

  it("keeps right associativity for implication", () => {
    const tree = binary(parseFormula("P -> Q -> R"));
    expect(tree.left).toEqual({ kind: "atom", name: "P", args: [] });
    expect(binary(tree.right).op).toBe("->");
  });

  it("lets prefixes swallow the rest of the group", () => {
    const tree = parseFormula("all x. P & Q");
    expect(tree.kind).toBe("quant");
    if (tree.kind === "quant") expect(binary(tree.body).op).toBe("&");

    const cut = binary(parseFormula("(all x. P) & Q"));
    expect(cut.op).toBe("&");
    expect(cut.left.kind).toBe("quant");
  });

  it("reads recurrence bounds", () => {
    const bounded = parseFormula("prec[2] P");
    expect(bounded).toMatchObject({ kind: "prefix", op: "prec", bound: 2 });
    const open = parseFormula("prec P");
    expect(open).toMatchObject({ kind: "prefix", op: "prec", bound: null });
    expect(parseFormula("tau[3] BIT")).toMatchObject({ kind: "prefix", op: "tau", bound: 3 });
  });

  it("rejects malformed input with a position", () => {
    expect(() => parseFormula("P \\/")).toThrow(FormulaError);
    expect(() => parseFormula("tau P")).toThrow(/bound/);
    expect(() => parseFormula("P Q")).toThrow(/after the formula/);
    expect(() => parseFormula("(P")).toThrow(FormulaError);
    expect(() => parseFormula("")).toThrow(FormulaError);
  });
});

describe("atomNames", () => {
  it("collects each atom once, sorted", () => {
    const tree = parseFormula("all x. exi y. Eq(y,x) /\\ (K(z,0) | Eq(x,x))");
    expect(atomNames(tree)).toEqual(["Eq", "K"]);
  });

  it("ignores constants", () => {
    expect(atomNames(parseFormula("TRUE & BIT"))).toEqual([]);
  });
});
