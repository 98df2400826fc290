#!/usr/bin/env node
/**
 * plot — render figures from simulator CSV output.
 *
 * Output is SVG regardless of the extension given to -o (this environment
 * has no rasterizer; SVG is accepted everywhere the figures are consumed).
 */

import { writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { pstarBars, rateVsM } from "./figures.js";
import { loadPstar, loadSweep, SchemaError } from "./schema.js";

export async function main(argv: string[]): Promise<number> {
  let exitCode = 0;
  await yargs(argv)
    .scriptName("plot")
    .command(
      "rate-vs-m <csv>",
      "rate versus cache size, one curve per scheme with error bars",
      (cmd) =>
        cmd
          .positional("csv", { type: "string", demandOption: true })
          .option("o", { alias: "output", type: "string", demandOption: true })
          .option("log-y", { type: "boolean", default: false }),
      (args) => {
        try {
          const rows = loadSweep(args.csv as string);
          writeFileSync(args.o as string, rateVsM(rows, { logY: args.logY as boolean }));
        } catch (err) {
          exitCode = handle(err);
        }
      },
    )
    .command(
      "pstar <csv>",
      "caching-distribution bar chart, grouped by file index",
      (cmd) =>
        cmd
          .positional("csv", { type: "string", demandOption: true })
          .option("o", { alias: "output", type: "string", demandOption: true }),
      (args) => {
        try {
          const rows = loadPstar(args.csv as string);
          writeFileSync(args.o as string, pstarBars(rows));
        } catch (err) {
          exitCode = handle(err);
        }
      },
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      if (err) throw err;
      console.error(msg);
      exitCode = 2;
    })
    .parseAsync();
  return exitCode;
}

function handle(err: unknown): number {
  if (err instanceof SchemaError) {
    console.error(`schema error: ${err.message}`);
    return 2;
  }
  console.error(String(err));
  return 1;
}

import { pathToFileURL } from "url";

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
