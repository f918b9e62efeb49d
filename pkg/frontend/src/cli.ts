#!/usr/bin/env node
import { readFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { EmptyInputError, SchemaError } from "./csv.js";
import { render } from "./render.js";
import { FIGURE_KINDS, plotSpecSchema } from "./schemas.js";

export async function main(argv: string[]): Promise<number> {
  let exit = 0;
  await yargs(argv)
    .command(
      "render",
      "render a figure from CSV/JSON artifacts",
      (y) =>
        y
          .option("spec", { type: "string", describe: "PlotSpec JSON file" })
          .option("kind", { type: "string", choices: FIGURE_KINDS })
          .option("in", { type: "array", string: true, describe: "input artifact paths" })
          .option("out", { type: "string", describe: "output .svg path" })
          .option("title", { type: "string" })
          .conflicts("spec", "kind"),
      (args) => {
        const raw = args.spec
          ? JSON.parse(readFileSync(args.spec, "utf8"))
          : {
              kind: args.kind,
              inputs: args.in ?? [],
              output: args.out,
              title: args.title,
            };
        const parsed = plotSpecSchema.safeParse(raw);
        if (!parsed.success) {
          console.error(`bad plot spec: ${parsed.error.message}`);
          exit = 2;
          return;
        }
        try {
          const path = render(parsed.data);
          console.log(`wrote ${path}`);
        } catch (err) {
          if (err instanceof SchemaError || err instanceof EmptyInputError) {
            console.error(String(err));
            exit = 2;
          } else {
            console.error(String(err));
            exit = 1;
          }
        }
      },
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      console.error(msg ?? String(err));
      exit = 2;
    })
    .parseAsync();
  return exit;
}

const entry = process.argv[1];
if (entry && (entry.endsWith("cli.js") || entry.endsWith("plots"))) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
