/** Categorical island colors (colorblind-safe-ish rotation). */

const PALETTE = [
  "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2",
  "#eeca3b", "#b279a2", "#ff9da6", "#9d755d", "#bab0ac",
];

export function colorFor(islandLabel: number): string {
  return PALETTE[(islandLabel - 1) % PALETTE.length];
}
