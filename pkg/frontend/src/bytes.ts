// Byte-level helpers shared by the grid and the forms. The service speaks
// base64 for anything that is raw text, and the UI renders non-printable
// bytes with the same \xNN escape the CLI uses.

export function fromBase64(s: string): Uint8Array {
  const raw = atob(s);
  const out = new Uint8Array(raw.length);
  for (let i = 0; i < raw.length; i++) {
    out[i] = raw.charCodeAt(i);
  }
  return out;
}

export function toBase64(bytes: Uint8Array): string {
  let raw = "";
  const chunk = 0x8000;
  for (let i = 0; i < bytes.length; i += chunk) {
    raw += String.fromCharCode(...bytes.subarray(i, i + chunk));
  }
  return btoa(raw);
}

export function encodeText(s: string): Uint8Array {
  return new TextEncoder().encode(s);
}

/** True for bytes rendered verbatim in a cell. */
export function isPrintable(byte: number): boolean {
  return byte >= 0x20 && byte <= 0x7e;
}

/** One display cell: the character itself, or \xNN for everything else. */
export function displayCell(byte: number): string {
  if (isPrintable(byte)) {
    return String.fromCharCode(byte);
  }
  return "\\x" + byte.toString(16).padStart(2, "0").toUpperCase();
}

export function displayText(bytes: Uint8Array): string {
  let out = "";
  for (const b of bytes) {
    out += displayCell(b);
  }
  return out;
}

/** Render an ordering as its spec string, e.g. [99,97] -> "c,a". */
export function orderLabel(order: number[]): string {
  return order.map(displayCell).join(",");
}

/**
 * Parse a single character field the way ordering strings read it:
 * a lone character stands for itself, \xNN is a hex escape. Returns null
 * when the field is not a single byte.
 */
export function parseCharField(field: string): number | null {
  if (field.length === 1) {
    const code = field.charCodeAt(0);
    return code <= 0xff ? code : null;
  }
  const hex = /^\\x([0-9a-fA-F]{2})$/.exec(field);
  if (hex) {
    return parseInt(hex[1], 16);
  }
  return null;
}

/**
 * Parse "c<a, b<d" style constraint lists into lesser/greater byte pairs.
 * Throws on anything that does not reduce to single characters.
 */
export function parseConstraints(
  text: string
): { lesser: number; greater: number }[] {
  const out: { lesser: number; greater: number }[] = [];
  for (const piece of text.split(",")) {
    const item = piece.trim();
    if (!item) {
      continue;
    }
    const parts = item.split("<");
    if (parts.length !== 2) {
      throw new Error(`expected "x<y", got "${item}"`);
    }
    const lesser = parseCharField(parts[0].trim());
    const greater = parseCharField(parts[1].trim());
    if (lesser === null || greater === null) {
      throw new Error(`expected single characters in "${item}"`);
    }
    out.push({ lesser, greater });
  }
  if (!out.length) {
    throw new Error("no constraints given");
  }
  return out;
}
