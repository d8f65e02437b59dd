import { parseCsv } from "./csv.js";
import { buildPanels } from "./figures.js";
import { renderFigure } from "./svg.js";

/** CSV text -> SVG text; throws SchemaError on malformed input. */
export function renderCsv(figureId: string, csvText: string): string {
  const rows = parseCsv(figureId, csvText);
  return renderFigure(buildPanels(figureId, rows));
}
