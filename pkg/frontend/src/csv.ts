import { readFileSync } from "node:fs";
import Papa from "papaparse";
import { CSV_HEADERS, type ParsedCsv } from "./schemas.js";

export class SchemaError extends Error {}
export class EmptyInputError extends Error {}

function headerMatches(fields: string[], expected: string[]): boolean {
  return (
    fields.length === expected.length &&
    expected.every((name, i) => fields[i] === name)
  );
}

/**
 * Parse a CSV artifact, identifying which documented schema its header
 * matches. Unknown headers and empty files are hard errors: a figure must
 * never silently render from the wrong artifact.
 */
export function readCsv(path: string): ParsedCsv {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  const schema = (Object.keys(CSV_HEADERS) as ParsedCsv["schema"][]).find((k) =>
    headerMatches(fields, CSV_HEADERS[k]),
  );
  if (!schema) {
    const known = Object.values(CSV_HEADERS)
      .map((h) => h.join(","))
      .join(" | ");
    throw new SchemaError(
      `${path}: unrecognized columns [${fields.join(",")}]; expected one of: ${known}`,
    );
  }
  if (parsed.data.length === 0) {
    throw new EmptyInputError(`${path}: no data rows`);
  }
  const rows = parsed.data.map((raw, i) => {
    const out: Record<string, number> = {};
    for (const name of fields) {
      const v = Number(raw[name]);
      if (!Number.isFinite(v)) {
        throw new SchemaError(
          `${path} row ${i + 2}: column ${name} is not numeric: ${raw[name]!}`,
        );
      }
      out[name] = v;
    }
    return out;
  });
  return { schema, rows } as ParsedCsv;
}
