import { mkdtempSync, writeFileSync, existsSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { describe, expect, it } from "vitest";
import { main } from "../src/cli.js";

const FIXTURES = resolve(__dirname, "../../tests/fixtures/a5");

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "plots-cli-"));
}

describe("plots render", () => {
  it("renders via --kind/--in/--out flags", async () => {
    const out = join(tmp(), "fig.svg");
    const code = await main([
      "render",
      "--kind", "limit_compare",
      "--in", join(FIXTURES, "limit_compare.csv"),
      "--out", out,
    ]);
    expect(code).toBe(0);
    expect(existsSync(out)).toBe(true);
  });

  it("renders via a --spec file", async () => {
    const dir = tmp();
    const out = join(dir, "fig.svg");
    const spec = join(dir, "spec.json");
    writeFileSync(
      spec,
      JSON.stringify({
        kind: "limit_compare",
        inputs: [join(FIXTURES, "limit_distribution.csv")],
        output: out,
        title: "limit distribution",
      }),
    );
    expect(await main(["render", "--spec", spec])).toBe(0);
    expect(existsSync(out)).toBe(true);
  });

  it("exits 2 on a schema mismatch", async () => {
    const dir = tmp();
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "x,y\n1,2\n");
    const code = await main([
      "render", "--kind", "limit_compare", "--in", bad,
      "--out", join(dir, "fig.svg"),
    ]);
    expect(code).toBe(2);
  });

  it("exits 2 on a bad spec", async () => {
    const code = await main([
      "render", "--kind", "limit_compare", "--out", "fig.svg",
    ]);
    expect(code).toBe(2);
  });
});
