/**
 * Renders the real experiment outputs produced by the simulator's
 * acceptance suite (runs/acceptance), when present; otherwise falls back
 * to schema-identical fixtures so this suite stands alone.
 */

import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";

const HERE = fileURLToPath(new URL(".", import.meta.url));
const REAL = join(HERE, "..", "..", "runs", "acceptance");

function fixture(dir: string, name: string, content: string): string {
  const path = join(dir, name);
  writeFileSync(path, content);
  return path;
}

function inputs(): { sweep: string; series: string; hist: string; refs: string } {
  if (
    ["sweep.csv", "series.csv", "histogram.csv", "histogram_refs.csv"].every((f) =>
      existsSync(join(REAL, f)),
    )
  ) {
    return {
      sweep: join(REAL, "sweep.csv"),
      series: join(REAL, "series.csv"),
      hist: join(REAL, "histogram.csv"),
      refs: join(REAL, "histogram_refs.csv"),
    };
  }
  const dir = mkdtempSync(join(tmpdir(), "acc-"));
  const taus = [0.5, 1.0, 2.0, 5.0, 20.0, 100.0];
  const sweep =
    "protocol,tau,seed_or_mean,sigma_ratio\n" +
    ["pe", "fb", "tm", "rs"]
      .flatMap((p, k) =>
        taus.map((tau, i) => `${p},${tau},,${(0.7 + 0.3 * Math.exp(-((i - 1.2) ** 2)) - 0.02 * k).toFixed(4)}`),
      )
      .join("\n") +
    "\n" +
    taus.map((tau) => `rd,${tau},mean,${tau < 3 ? 1.05 : 0.9}`).join("\n") +
    "\n";
  const series =
    "protocol,tau,seed,t,sigma,entropy,ipr,leak\n" +
    ["free", "pe", "fb", "tm", "rs", "rd"]
      .flatMap((p, k) =>
        [0, 1000, 2000, 4000].map(
          (t) => `${p},1.0,,${t},${(t * (1.4 - 0.05 * k)).toFixed(1)},${(t / 1500).toFixed(3)},${t / 2 + 1},1e-30`,
        ),
      )
      .join("\n") +
    "\n";
  const hist =
    "seed,sigma_ratio\n" +
    Array.from({ length: 100 }, (_, i) => `${12345 + i},${(1.04 + 0.0015 * (i % 40)).toFixed(4)}`).join("\n") +
    "\n";
  const refs = "protocol,tau,sigma_ratio\nfb,0.94,1.23\npe,1.23,1.34\nrs,0.78,1.14\ntm,0.65,1.21\n";
  return {
    sweep: fixture(dir, "sweep.csv", sweep),
    series: fixture(dir, "series.csv", series),
    hist: fixture(dir, "histogram.csv", hist),
    refs: fixture(dir, "histogram_refs.csv", refs),
  };
}

describe("acceptance: all five figure kinds render from experiment CSVs", () => {
  const src = inputs();
  const out = mkdtempSync(join(tmpdir(), "acc-out-"));

  it("sweep with unity line", () => {
    const file = join(out, "sweep.svg");
    expect(main(["--kind", "sweep", "--in", src.sweep, "--out", file, "--logx"])).toBe(0);
    const svg = readFileSync(file, "utf8");
    expect(svg).toContain("sigma/sigma0 = 1");
    expect(svg).toContain(">pe</text>");
    expect(svg).toContain(">rd</text>");
  });

  it.each(["series-sigma", "series-entropy", "series-ipr"] as const)("%s", (kind) => {
    const file = join(out, `${kind}.svg`);
    expect(main(["--kind", kind, "--in", src.series, "--out", file])).toBe(0);
    expect(readFileSync(file, "utf8")).toContain("<path ");
  });

  it("histogram with reference lines", () => {
    const file = join(out, "histogram.svg");
    expect(main(["--kind", "histogram", "--in", src.hist, src.refs, "--out", file])).toBe(0);
    const svg = readFileSync(file, "utf8");
    expect(svg).toContain("<rect ");
    expect((svg.match(/stroke-dasharray="5 4"/g) ?? []).length).toBe(4);
  });

  it("deterministic bytes on re-render", () => {
    const a = join(out, "a.svg");
    const b = join(out, "b.svg");
    main(["--kind", "sweep", "--in", src.sweep, "--out", a]);
    main(["--kind", "sweep", "--in", src.sweep, "--out", b]);
    expect(readFileSync(a, "utf8")).toBe(readFileSync(b, "utf8"));
  });
});
