/** Live input preview: a lightweight local well-formedness check and a
 * prettified echo (superscripts, radical sign). Purely presentational:
 * every judgement about a step comes from the service. */

export interface Preview {
  ok: boolean;
  pretty: string;
  problem?: string;
}

const TOKEN = /\s*(\d+|[a-zA-Z]+|\^|\+|-|\*|\/|\(|\)|=)/y;

type Token = { kind: string; text: string; at: number };

function tokenize(text: string): Token[] | string {
  const tokens: Token[] = [];
  let index = 0;
  while (index < text.length) {
    TOKEN.lastIndex = index;
    const match = TOKEN.exec(text);
    if (!match) {
      if (text.slice(index).trim() === "") break;
      return `unexpected character at offset ${index}`;
    }
    const raw = match[1];
    const at = match.index + match[0].length - raw.length;
    let kind = raw;
    if (/^\d+$/.test(raw)) kind = "int";
    else if (raw === "or") kind = "or";
    else if (raw === "x") kind = "x";
    else if (raw === "sqrt") kind = "sqrt";
    else if (/^[a-zA-Z]+$/.test(raw)) return `unknown name "${raw}" at offset ${at}`;
    tokens.push({ kind, text: raw, at });
    index = TOKEN.lastIndex;
  }
  tokens.push({ kind: "end", text: "", at: text.length });
  return tokens;
}

/** Recursive-descent mirror of the service grammar, checking shape only. */
function wellFormed(tokens: Token[]): string | undefined {
  let i = 0;
  const peek = () => tokens[i];
  const fail = (expected: string) =>
    `expected ${expected} at offset ${peek().at}`;

  function atom(): string | undefined {
    const t = peek();
    if (t.kind === "int") {
      i += 1;
      if (peek().kind === "/") {
        i += 1;
        if (peek().kind !== "int") return fail("a denominator");
        i += 1;
      }
      return undefined;
    }
    if (t.kind === "x") {
      i += 1;
      return undefined;
    }
    if (t.kind === "(" || t.kind === "sqrt") {
      if (t.kind === "sqrt") {
        i += 1;
        if (peek().kind !== "(") return fail("'(' after sqrt");
      }
      i += 1;
      const err = expr();
      if (err) return err;
      if (peek().kind !== ")") return fail("')'");
      i += 1;
      return undefined;
    }
    return fail("a number, x, sqrt or '('");
  }

  function factor(allowMinus: boolean): string | undefined {
    if (allowMinus && peek().kind === "-") i += 1;
    const err = atom();
    if (err) return err;
    if (peek().kind === "^") {
      i += 1;
      if (peek().kind !== "int" || peek().text === "0") return fail("a positive exponent");
      i += 1;
    }
    return undefined;
  }

  function term(): string | undefined {
    let err = factor(true);
    if (err) return err;
    for (;;) {
      const k = peek().kind;
      if (k === "*") {
        i += 1;
        err = factor(true);
      } else if (k === "(" || k === "x" || k === "sqrt") {
        err = factor(false);
      } else {
        return undefined;
      }
      if (err) return err;
    }
  }

  function expr(): string | undefined {
    let err = term();
    if (err) return err;
    while (peek().kind === "+" || peek().kind === "-") {
      i += 1;
      err = term();
      if (err) return err;
    }
    return undefined;
  }

  function equation(): string | undefined {
    let err = expr();
    if (err) return err;
    if (peek().kind !== "=") return fail("'='");
    i += 1;
    return expr();
  }

  let err = equation();
  if (err) return err;
  while (peek().kind === "or") {
    i += 1;
    err = equation();
    if (err) return err;
  }
  return peek().kind === "end" ? undefined : fail("'or' or end of input");
}

const SUPERSCRIPTS: Record<string, string> = {
  "0": "⁰", "1": "¹", "2": "²", "3": "³", "4": "⁴",
  "5": "⁵", "6": "⁶", "7": "⁷", "8": "⁸", "9": "⁹",
};

export function prettify(text: string): string {
  return text
    .replace(/\^(\d+)/g, (_, digits: string) =>
      digits.split("").map((d) => SUPERSCRIPTS[d] ?? d).join(""),
    )
    .replace(/sqrt\(/g, "√(")
    .replace(/\*/g, "·");
}

export function previewInput(text: string): Preview {
  if (text.trim() === "") {
    return { ok: false, pretty: "", problem: "enter an equation" };
  }
  const tokens = tokenize(text);
  if (typeof tokens === "string") {
    return { ok: false, pretty: prettify(text), problem: tokens };
  }
  const problem = wellFormed(tokens);
  return { ok: problem === undefined, pretty: prettify(text), problem };
}
