import * as fs from "fs";

/**
 * Alien-name simplification table: `alien,replacement` CSV with a header
 * row.  Names are rewritten in the raw text before parsing so the
 * downstream tagger sees familiar tokens.
 */
export type NameTable = Map<string, string>;

export function loadNameTable(path: string): NameTable {
  const table: NameTable = new Map();
  const lines = fs.readFileSync(path, "utf-8").split(/\r?\n/);
  for (const line of lines.slice(1)) {
    if (!line.trim()) continue;
    const [alien, simple] = line.split(",", 2).map((s) => s.trim());
    if (!alien || !simple) {
      throw new Error(`malformed name table row: ${JSON.stringify(line)}`);
    }
    table.set(alien, simple);
  }
  return table;
}

/** Replace every whole-word occurrence of each alien name. */
export function simplifyNames(text: string, table: NameTable): string {
  let out = text;
  // longest names first so multiword aliens are not partially rewritten
  const names = [...table.keys()].sort((a, b) => b.length - a.length);
  for (const alien of names) {
    const escaped = alien.replace(/[.*+?^${}()|[\]\\]/g, "\\$&");
    out = out.replace(new RegExp(`\\b${escaped}\\b`, "g"), table.get(alien)!);
  }
  return out;
}
