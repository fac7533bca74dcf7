/** Extraction of raw number tokens from response bytes.
 *
 * Displayed values must be the server's bytes, not a client reformatting
 * (String(1.0) would print "1" where the server said "1.0").  These helpers
 * scan the response text for the value of a key and return number tokens
 * exactly as sent.
 */

const NUMBER = /-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][+-]?\d+)?/y;
const WS = new Set([" ", "\t", "\n", "\r"]);

function valueStart(text: string, key: string): number {
  const marker = `"${key}"`;
  const at = text.indexOf(marker);
  if (at < 0) throw new Error(`key ${key} not found in response`);
  let i = at + marker.length;
  while (i < text.length && WS.has(text[i])) i++;
  if (text[i] !== ":") throw new Error(`key ${key} is not followed by a value`);
  i++;
  while (i < text.length && WS.has(text[i])) i++;
  return i;
}

/** Raw token of a scalar number value, e.g. rawNumber(text, "spectral_radius"). */
export function rawNumber(text: string, key: string): string {
  const start = valueStart(text, key);
  NUMBER.lastIndex = start;
  const match = NUMBER.exec(text);
  if (!match) throw new Error(`key ${key} does not hold a number`);
  return match[0];
}

/** Raw tokens of a 2-D number array value, e.g. the "y" series of a trajectory. */
export function rawNumberGrid(text: string, key: string): string[][] {
  let i = valueStart(text, key);
  if (text[i] !== "[") throw new Error(`key ${key} does not hold an array`);
  i++;
  const grid: string[][] = [];
  let row: string[] | null = null;
  while (i < text.length) {
    const ch = text[i];
    if (WS.has(ch) || ch === ",") {
      i++;
    } else if (ch === "[") {
      row = [];
      i++;
    } else if (ch === "]") {
      if (row === null) return grid; // outer array closed
      grid.push(row);
      row = null;
      i++;
    } else {
      NUMBER.lastIndex = i;
      const match = NUMBER.exec(text);
      if (!match || row === null) throw new Error(`malformed array under key ${key}`);
      row.push(match[0]);
      i = NUMBER.lastIndex;
    }
  }
  throw new Error(`unterminated array under key ${key}`);
}
