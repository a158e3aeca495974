// Wire types for the play service, mirrored by hand from its JSON.

export type PlayerName = "T" | "B";

export interface SessionStatus {
  state: "RUNNING" | "FINISHED";
  winner?: PlayerName;
  offender?: PlayerName;
}

export interface Snapshot {
  id?: string;
  run: string;
  status: SessionStatus;
  hints: string[];
  last_machine_moves: string[];
}

export interface CreateRequest {
  formula: string;
  machine: string;
  interp?: unknown;
}

// The run format spells the empty move "_"; that is also how moves are
// sent on the wire, so the literal underscore never names a real move.
export const EMPTY_MOVE_TOKEN = "_";

export interface RunEntry {
  player: PlayerName;
  move: string; // wire spelling, "_" for the empty move
}

export function parseRun(text: string): RunEntry[] {
  const entries: RunEntry[] = [];
  for (const token of text.split(/\s+/)) {
    if (!token) continue;
    if ((token[0] !== "T" && token[0] !== "B") || token[1] !== ":") {
      throw new Error(`bad run token ${JSON.stringify(token)}`);
    }
    entries.push({ player: token[0] as PlayerName, move: token.slice(2) });
  }
  return entries;
}
