export { readCsv, requireColumns, numericColumn, stringColumn } from "./csv.js";
export type { Table } from "./csv.js";
export { renderFigure, FIGURE_KINDS } from "./figures.js";
export type { FigureKind, FigureSpec } from "./figures.js";
export { main, parseArgs } from "./cli.js";
