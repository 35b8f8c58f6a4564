// Color rule for the leaning axis. The neutral band boundaries are a
// config constant, not a product of the data.

export const NEUTRAL_BAND: readonly [number, number] = [1 / 3, 2 / 3];

export const LIBERAL_COLOR = "#2166ac"; // blue
export const NEUTRAL_COLOR = "#1a9850"; // green
export const CONSERVATIVE_COLOR = "#b2182b"; // red
export const MUTED_COLOR = "#c4c4c4"; // sources the user never touched
export const USER_COLOR = "#111111";

export function ideologyColor(ideology: number): string {
  if (ideology < NEUTRAL_BAND[0]) return LIBERAL_COLOR;
  if (ideology > NEUTRAL_BAND[1]) return CONSERVATIVE_COLOR;
  return NEUTRAL_COLOR;
}

export function sourceColor(ideology: number, consumed: boolean): string {
  return consumed ? ideologyColor(ideology) : MUTED_COLOR;
}
