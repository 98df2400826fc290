import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { dirname, join } from "path";
import { fileURLToPath } from "url";
import { describe, expect, it } from "vitest";
import { groupBy, loadPstar, loadSweep, SchemaError } from "../src/schema.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

function tmpCsv(content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
  const path = join(dir, "input.csv");
  writeFileSync(path, content);
  return path;
}

describe("loadSweep", () => {
  it("parses the simulator's aggregate sweep output", () => {
    const rows = loadSweep(join(FIXTURES, "sweep.csv"));
    expect(rows.length).toBeGreaterThan(0);
    const schemes = new Set(rows.map((r) => r.scheme));
    expect(schemes).toEqual(new Set(["rlfu:auto", "up", "lfu-nm"]));
    for (const row of rows) {
      expect(row.meanRate).toBeGreaterThan(0);
      expect(row.stderrRate).toBeGreaterThanOrEqual(0);
      expect([5, 20, 50]).toContain(row.M);
    }
  });

  it("rejects a missing column", () => {
    const path = tmpCsv("scheme,M,mean_rate\nup,1,2.0\n");
    expect(() => loadSweep(path)).toThrow(SchemaError);
    expect(() => loadSweep(path)).toThrow(/stderr_rate/);
  });

  it("rejects an empty file", () => {
    const path = tmpCsv("scheme,M,mean_rate,stderr_rate\n");
    expect(() => loadSweep(path)).toThrow(/no data rows/);
  });

  it("rejects a malformed numeric cell with its row number", () => {
    const path = tmpCsv("scheme,M,mean_rate,stderr_rate\nup,1,not-a-number,0\n");
    expect(() => loadSweep(path)).toThrow(/row 2/);
  });
});

describe("loadPstar", () => {
  it("parses label,file,p rows", () => {
    const rows = loadPstar(join(FIXTURES, "pstar.csv"));
    const labels = new Set(rows.map((r) => r.label));
    expect(labels).toEqual(new Set(["n=3", "n=5", "n=10", "n=15"]));
    for (const row of rows) {
      expect(row.p).toBeGreaterThanOrEqual(0);
      expect(row.p).toBeLessThanOrEqual(1);
    }
    // each label is a distribution over the same library
    for (const label of labels) {
      const mass = rows.filter((r) => r.label === label).reduce((acc, r) => acc + r.p, 0);
      expect(mass).toBeCloseTo(1.0, 6);
    }
  });

  it("rejects missing columns", () => {
    const path = tmpCsv("label,file\nn=3,1\n");
    expect(() => loadPstar(path)).toThrow(SchemaError);
  });
});

describe("groupBy", () => {
  it("preserves first-seen order", () => {
    const grouped = groupBy(
      [{ k: "b" }, { k: "a" }, { k: "b" }],
      (row) => row.k,
    );
    expect([...grouped.keys()]).toEqual(["b", "a"]);
    expect(grouped.get("b")).toHaveLength(2);
  });
});
