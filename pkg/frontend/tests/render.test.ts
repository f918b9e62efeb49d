import { mkdtempSync, readFileSync, writeFileSync, existsSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { describe, expect, it } from "vitest";
import { readCsv, EmptyInputError, SchemaError } from "../src/csv.js";
import { render } from "../src/render.js";
import { plotSpecSchema } from "../src/schemas.js";

// CSVs produced by the primary package's limit-convergence acceptance run
const FIXTURES = resolve(__dirname, "../../tests/fixtures/a5");

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "plots-"));
}

describe("csv parsing", () => {
  it("identifies each documented schema", () => {
    const dir = tmp();
    const cases: [string, string, string][] = [
      ["limit.csv", "s,c\n1,1.5\n", "limit"],
      ["cmp.csv", "s,empirical,analytic,rel_err\n1,1.4,1.5,0.06\n", "comparison"],
      ["hist.csv", "s,count\n1,10\n", "histogram"],
      ["w.csv", "M,w,count,n\n2,1,5,100\n", "weights"],
      ["trace.csv", "n,V\n10,8\n", "trace"],
      ["exp.csv", "n,s,expectation\n2,1,3.17\n", "expectation"],
    ];
    for (const [name, text, schema] of cases) {
      const p = join(dir, name);
      writeFileSync(p, text);
      expect(readCsv(p).schema).toBe(schema);
    }
  });

  it("rejects unknown columns, naming them", () => {
    const p = join(tmp(), "bad.csv");
    writeFileSync(p, "foo,bar\n1,2\n");
    expect(() => readCsv(p)).toThrowError(/foo,bar/);
  });

  it("rejects empty CSVs", () => {
    const p = join(tmp(), "empty.csv");
    writeFileSync(p, "s,c\n");
    expect(() => readCsv(p)).toThrow(EmptyInputError);
  });

  it("rejects non-numeric cells", () => {
    const p = join(tmp(), "nan.csv");
    writeFileSync(p, "s,c\n1,huh\n");
    expect(() => readCsv(p)).toThrowError(/column c/);
  });
});

describe("limit_compare (criterion A12)", () => {
  it("renders from the limit-convergence run's CSVs", () => {
    const out = join(tmp(), "limit_compare.svg");
    render({
      kind: "limit_compare",
      inputs: [
        join(FIXTURES, "limit_compare.csv"),
        join(FIXTURES, "limit_distribution.csv"),
      ],
      output: out,
    });
    const svg = readFileSync(out, "utf8");
    expect(svg).toContain("<svg");
    expect(svg).toContain("circle"); // empirical points
    expect(svg).toContain("polyline"); // analytic curve
    expect(svg).toContain("empirical X_n(s)/n");
    expect(svg).toContain("analytic c(u,s)");
  });

  it("renders the analytic-only curve alone", () => {
    const out = join(tmp(), "analytic.svg");
    render({
      kind: "limit_compare",
      inputs: [join(FIXTURES, "limit_distribution.csv")],
      output: out,
    });
    expect(readFileSync(out, "utf8")).toContain("polyline");
  });

  it("rejects a histogram input (needs normalized data)", () => {
    expect(() =>
      render({
        kind: "limit_compare",
        inputs: [join(FIXTURES, "model_s_histogram.csv")],
        output: join(tmp(), "x.svg"),
      }),
    ).toThrow(SchemaError);
  });

  it("does not emit a figure from an empty CSV", () => {
    const dir = tmp();
    const empty = join(dir, "empty.csv");
    writeFileSync(empty, "s,c\n");
    const out = join(dir, "nothing.svg");
    expect(() =>
      render({ kind: "limit_compare", inputs: [empty], output: out }),
    ).toThrow(EmptyInputError);
    expect(existsSync(out)).toBe(false);
  });
});

describe("ccdf_fit", () => {
  const report = {
    exponent_hat: 3.6667,
    stderr: 0.007,
    method: "ccdf_regression",
    fit_range: [20, 300],
    n_tail_points: 128,
    target_exponent: 3.6667,
    verdict: "pass",
    margin: 0.0,
  };

  it("passes the upstream exponent through as the annotation", () => {
    const dir = tmp();
    const fitPath = join(dir, "fit.json");
    writeFileSync(fitPath, JSON.stringify(report));
    const out = join(dir, "ccdf.svg");
    render({
      kind: "ccdf_fit",
      inputs: [join(FIXTURES, "model_s_histogram.csv"), fitPath],
      output: out,
    });
    const svg = readFileSync(out, "utf8");
    expect(svg).toContain("α̂ = 3.67"); // never re-fitted here
    expect(svg).toContain("slope -3.67");
  });

  it("rejects a malformed fit report", () => {
    const dir = tmp();
    const fitPath = join(dir, "fit.json");
    writeFileSync(fitPath, JSON.stringify({ exponent: 3 }));
    expect(() =>
      render({
        kind: "ccdf_fit",
        inputs: [join(FIXTURES, "model_s_histogram.csv"), fitPath],
        output: join(dir, "x.svg"),
      }),
    ).toThrow(SchemaError);
  });
});

describe("convergence", () => {
  it("draws one line per score from an expectation table", () => {
    const dir = tmp();
    const p = join(dir, "exp.csv");
    writeFileSync(
      p,
      "n,s,expectation\n" +
        [1, 2, 3, 4]
          .flatMap((n) => [`${n},1,${2 * n}`, `${n},2,${0.5 * n}`])
          .join("\n") +
        "\n",
    );
    const out = join(dir, "conv.svg");
    render({ kind: "convergence", inputs: [p], output: out });
    const svg = readFileSync(out, "utf8");
    expect(svg).toContain("E X_n(1)");
    expect(svg).toContain("E X_n(2)");
  });
});

describe("plot spec validation", () => {
  it("rejects unknown kinds and empty inputs", () => {
    expect(plotSpecSchema.safeParse({ kind: "pie", inputs: ["a"], output: "o.svg" }).success).toBe(false);
    expect(plotSpecSchema.safeParse({ kind: "ccdf_fit", inputs: [], output: "o.svg" }).success).toBe(false);
  });

  it("rejects non-svg output", () => {
    expect(() =>
      render({
        kind: "limit_compare",
        inputs: [join(FIXTURES, "limit_distribution.csv")],
        output: join(tmp(), "fig.png"),
      }),
    ).toThrowError(/svg only/);
  });
});
