#!/usr/bin/env node
import * as fs from "fs";
import * as path from "path";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { loadNameTable, simplifyNames } from "./names";
import { parseStory } from "./parse";
import { StorySchema } from "./types";

function main(): number {
  const argv = yargs(hideBin(process.argv))
    .usage("story-preprocess --in <dir> --out <jsonl> [--names <csv>]")
    .option("in", { type: "string", demandOption: true, describe: "directory of .txt story files" })
    .option("out", { type: "string", demandOption: true, describe: "interchange JSONL output path" })
    .option("names", { type: "string", describe: "alien-name simplification CSV" })
    .strict()
    .parseSync();

  const table = argv.names ? loadNameTable(argv.names) : new Map<string, string>();
  const files = fs
    .readdirSync(argv.in)
    .filter((f) => f.endsWith(".txt"))
    .sort();
  if (files.length === 0) {
    console.error(JSON.stringify({ error: "user", message: `no .txt files in ${argv.in}` }));
    return 1;
  }

  const lines: string[] = [];
  let skipped = 0;
  for (const file of files) {
    const id = path.basename(file, ".txt");
    const raw = fs.readFileSync(path.join(argv.in, file), "utf-8");
    try {
      const story = parseStory(id, simplifyNames(raw, table), id, "preprocess");
      lines.push(JSON.stringify(StorySchema.parse(story)));
    } catch (err) {
      // parse failures are logged and skipped, never silently dropped
      skipped += 1;
      console.error(
        JSON.stringify({ error: "story", id, message: err instanceof Error ? err.message : String(err) }),
      );
    }
  }
  fs.writeFileSync(argv.out, lines.join("\n") + "\n", "utf-8");
  console.error(`wrote ${lines.length} stories to ${argv.out} (${skipped} skipped)`);
  return 0;
}

process.exitCode = main();
