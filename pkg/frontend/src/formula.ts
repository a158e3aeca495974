// Client-side formula parser.  Only used to draw the game tree with
// activity markers; legality and verdicts always come from the service.
//
// Grammar, loosest to tightest: -> >- (right), then sor, sand, \/, /\,
// |, & (left).  Prefix forms (~, prec, prec[n], srec, stack, tau[n],
// all x., exi x.) scope maximally rightward.

export type BinaryOp = "->" | ">-" | "sor" | "sand" | "\\/" | "/\\" | "|" | "&";

export type FormulaNode =
  | { kind: "atom"; name: string; args: string[] }
  | { kind: "const"; name: "TRUE" | "FALSE" | "BIT" | "T" }
  | { kind: "neg"; body: FormulaNode }
  | { kind: "binary"; op: BinaryOp; left: FormulaNode; right: FormulaNode }
  | { kind: "prefix"; op: "prec" | "srec" | "stack" | "tau"; bound: number | null; body: FormulaNode }
  | { kind: "quant"; op: "all" | "exi"; variable: string; body: FormulaNode };

export class FormulaError extends Error {
  constructor(
    message: string,
    readonly pos: number,
  ) {
    super(`${message} (at ${pos})`);
  }
}

interface Token {
  kind: "sym" | "ident" | "num" | "end";
  text: string;
  pos: number;
}

const KEYWORDS = new Set(["sand", "sor", "prec", "srec", "stack", "tau", "all", "exi"]);
const CONSTANTS = new Set(["TRUE", "FALSE", "BIT", "T"]);
const TWO_CHAR = ["/\\", "\\/", "->", ">-"];
const ONE_CHAR = "~&|()[].,";

function tokenize(text: string): Token[] {
  const tokens: Token[] = [];
  let i = 0;
  while (i < text.length) {
    const c = text[i];
    if (/\s/.test(c)) {
      i += 1;
      continue;
    }
    const two = text.slice(i, i + 2);
    if (TWO_CHAR.includes(two)) {
      tokens.push({ kind: "sym", text: two, pos: i });
      i += 2;
      continue;
    }
    if (ONE_CHAR.includes(c)) {
      tokens.push({ kind: "sym", text: c, pos: i });
      i += 1;
      continue;
    }
    if (/[0-9]/.test(c)) {
      let j = i;
      while (j < text.length && /[0-9]/.test(text[j])) j += 1;
      tokens.push({ kind: "num", text: text.slice(i, j), pos: i });
      i = j;
      continue;
    }
    if (/[A-Za-z_]/.test(c)) {
      let j = i;
      while (j < text.length && /[A-Za-z0-9_]/.test(text[j])) j += 1;
      tokens.push({ kind: "ident", text: text.slice(i, j), pos: i });
      i = j;
      continue;
    }
    throw new FormulaError(`unexpected character ${JSON.stringify(c)}`, i);
  }
  tokens.push({ kind: "end", text: "", pos: text.length });
  return tokens;
}

const BINARY: Record<string, { prec: number; right: boolean }> = {
  "->": { prec: 1, right: true },
  ">-": { prec: 1, right: true },
  sor: { prec: 2, right: false },
  sand: { prec: 3, right: false },
  "\\/": { prec: 4, right: false },
  "/\\": { prec: 5, right: false },
  "|": { prec: 6, right: false },
  "&": { prec: 7, right: false },
};

export function parseFormula(text: string): FormulaNode {
  const tokens = tokenize(text);
  let at = 0;

  const peek = () => tokens[at];
  const next = () => tokens[at++];
  const expect = (want: string): Token => {
    const token = next();
    if (token.text !== want) {
      throw new FormulaError(`expected ${JSON.stringify(want)}, got ${token.text || "end of input"}`, token.pos);
    }
    return token;
  };

  function parseBound(): number | null {
    if (peek().text !== "[") return null;
    next();
    const token = next();
    if (token.kind !== "num") throw new FormulaError("expected a number", token.pos);
    expect("]");
    return parseInt(token.text, 10);
  }

  function parseAtomTail(name: string): FormulaNode {
    const args: string[] = [];
    if (peek().text === "(") {
      next();
      for (;;) {
        const token = next();
        if (token.kind !== "ident" && token.kind !== "num") {
          throw new FormulaError("expected a variable or numeral", token.pos);
        }
        args.push(token.text);
        if (peek().text === ",") {
          next();
          continue;
        }
        expect(")");
        break;
      }
    }
    return { kind: "atom", name, args };
  }

  // prefix bodies swallow everything up to the enclosing group's end
  function parsePrimary(): FormulaNode {
    const token = next();
    if (token.text === "(") {
      const inner = parseBinary(0);
      expect(")");
      return inner;
    }
    if (token.text === "~") return { kind: "neg", body: parsePrimary() };
    if (token.kind === "ident") {
      if (CONSTANTS.has(token.text)) return { kind: "const", name: token.text as never };
      if (token.text === "all" || token.text === "exi") {
        const variable = next();
        if (variable.kind !== "ident" || KEYWORDS.has(variable.text)) {
          throw new FormulaError("expected a variable name", variable.pos);
        }
        expect(".");
        return { kind: "quant", op: token.text, variable: variable.text, body: parseBinary(0) };
      }
      if (token.text === "prec" || token.text === "srec" || token.text === "stack" || token.text === "tau") {
        const bound = parseBound();
        if (token.text === "tau" && bound === null) {
          throw new FormulaError("tau needs a [bound]", token.pos);
        }
        return { kind: "prefix", op: token.text, bound, body: parseBinary(0) };
      }
      if (KEYWORDS.has(token.text)) {
        throw new FormulaError(`${token.text} cannot start a formula`, token.pos);
      }
      return parseAtomTail(token.text);
    }
    throw new FormulaError(`expected a formula, got ${token.text || "end of input"}`, token.pos);
  }

  function parseBinary(minPrec: number): FormulaNode {
    let left = parsePrimary();
    for (;;) {
      const token = peek();
      const op = BINARY[token.text];
      if (!op || op.prec < minPrec) return left;
      next();
      const right = parseBinary(op.right ? op.prec : op.prec + 1);
      left = { kind: "binary", op: token.text as BinaryOp, left, right };
    }
  }

  const expr = parseBinary(0);
  const trailing = peek();
  if (trailing.kind !== "end") {
    throw new FormulaError(`unexpected ${JSON.stringify(trailing.text)} after the formula`, trailing.pos);
  }
  return expr;
}

/** Atom names used in the formula, for prefilling an interpretation. */
export function atomNames(node: FormulaNode): string[] {
  const seen = new Set<string>();
  const walk = (n: FormulaNode): void => {
    switch (n.kind) {
      case "atom":
        seen.add(n.name);
        return;
      case "const":
        return;
      case "neg":
        return walk(n.body);
      case "binary":
        walk(n.left);
        return walk(n.right);
      case "prefix":
      case "quant":
        return walk(n.body);
    }
  };
  walk(node);
  return [...seen].sort();
}
