import { ServiceClient, ServiceError } from "./client.js";
import { atomNames, parseFormula, FormulaNode } from "./formula.js";
import { parseRun, Snapshot } from "./protocol.js";
import { annotate, bannerFor, decideSubmit, ActivityNode } from "./view.js";

const BUILTIN_ATOMS = new Set(["Eq", "Halts", "Accepts", "K"]);

const MACHINE_SUGGESTIONS = [
  "function:id",
  "function:succ",
  "copycat",
  "choose-left",
  "choose-right",
  "silent",
  "halt2accept",
  "kolmogorov",
  "re-switch",
  "random:0",
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

/** Default interpretation for the formula: builtins by name, other atoms true. */
export function defaultInterp(formula: string): object | null {
  let tree: FormulaNode;
  try {
    tree = parseFormula(formula);
  } catch {
    return null;
  }
  const atoms: Record<string, object> = {};
  for (const name of atomNames(tree)) {
    atoms[name] = BUILTIN_ATOMS.has(name)
      ? { kind: "builtin", name }
      : { kind: "const", value: true };
  }
  return { atoms, universe_bound: 8 };
}

function renderTree(node: ActivityNode): HTMLElement {
  const li = el("li", { class: node.active ? "node" : "node inactive" });
  const head = el("span", { class: "node-label" }, node.label);
  li.append(head);
  if (node.detail) li.append(" ", el("em", { class: "node-detail" }, node.detail));
  if (node.children.length) {
    const ul = el("ul", {});
    for (const child of node.children) ul.append(renderTree(child));
    li.append(ul);
  }
  return li;
}

export class PlayApp {
  private sessionId: string | null = null;
  private stopStream: (() => void) | null = null;
  private formulaTree: FormulaNode | null = null;
  private hints: string[] = [];
  private pendingConfirm: string | null = null;
  private interpDirty = false;
  private finished = false;

  // setup panel
  private formulaInput!: HTMLInputElement;
  private machineInput!: HTMLInputElement;
  private interpInput!: HTMLTextAreaElement;
  private setupError!: HTMLElement;
  private setupPanel!: HTMLElement;

  // play panel
  private playPanel!: HTMLElement;
  private banner!: HTMLElement;
  private sessionLabel!: HTMLElement;
  private runText!: HTMLElement;
  private historyList!: HTMLElement;
  private hintsList!: HTMLElement;
  private moveInput!: HTMLInputElement;
  private moveWarning!: HTMLElement;
  private treePane!: HTMLElement;

  constructor(
    root: HTMLElement,
    private client: ServiceClient,
  ) {
    root.append(this.buildSetup(), this.buildPlay());
    this.showSetup();
  }

  private buildSetup(): HTMLElement {
    this.formulaInput = el("input", {
      id: "formula-input",
      type: "text",
      value: "all x. exi y. Eq(y,x)",
      spellcheck: "false",
    });
    this.machineInput = el("input", {
      id: "machine-input",
      type: "text",
      value: "function:id",
      list: "machine-suggestions",
      spellcheck: "false",
    });
    const datalist = el("datalist", { id: "machine-suggestions" });
    for (const name of MACHINE_SUGGESTIONS) datalist.append(el("option", { value: name }));
    this.interpInput = el("textarea", { id: "interp-input", rows: "6", spellcheck: "false" });
    this.interpInput.addEventListener("input", () => {
      this.interpDirty = true;
    });
    this.formulaInput.addEventListener("input", () => this.refillInterp());
    this.setupError = el("div", { id: "setup-error", class: "error", hidden: "" });
    const startButton = el("button", { id: "start-button", type: "button" }, "start session");
    startButton.addEventListener("click", () => void this.start());

    this.setupPanel = el(
      "section",
      { id: "setup-panel" },
      el("label", { for: "formula-input" }, "formula"),
      this.formulaInput,
      el("label", { for: "machine-input" }, "machine (plays ⊤)"),
      this.machineInput,
      datalist,
      el("label", { for: "interp-input" }, "interpretation"),
      this.interpInput,
      this.setupError,
      startButton,
    );
    this.refillInterp();
    return this.setupPanel;
  }

  private buildPlay(): HTMLElement {
    this.banner = el("div", { id: "banner", class: "banner info" });
    this.sessionLabel = el("code", { id: "session-label" });
    this.runText = el("code", { id: "run-text" });
    this.historyList = el("ol", { id: "history-list" });
    this.hintsList = el("div", { id: "hints-list" });
    this.moveInput = el("input", { id: "move-input", type: "text", spellcheck: "false" });
    this.moveWarning = el("div", { id: "move-warning", class: "warn", hidden: "" });
    this.treePane = el("ul", { id: "tree-pane", class: "tree" });

    const playButton = el("button", { id: "play-button", type: "button" }, "play move");
    playButton.addEventListener("click", () => void this.play(this.moveInput.value));
    this.moveInput.addEventListener("keydown", (event) => {
      if (event.key === "Enter") void this.play(this.moveInput.value);
    });
    const pokeButton = el("button", { id: "poke-button", type: "button" }, "nudge ⊤");
    pokeButton.addEventListener("click", () => void this.submit([]));
    const newButton = el("button", { id: "new-session-button", type: "button" }, "new session");
    newButton.addEventListener("click", () => this.reset());

    this.playPanel = el(
      "section",
      { id: "play-panel", hidden: "" },
      this.banner,
      el("div", { class: "meta" }, "session ", this.sessionLabel, " · run ", this.runText),
      el("div", { class: "columns" },
        el("div", { class: "col" }, el("h2", {}, "game"), this.treePane),
        el("div", { class: "col" },
          el("h2", {}, "history"), this.historyList,
          el("h2", {}, "your move"), this.hintsList,
          el("div", { class: "entry" }, this.moveInput, playButton, pokeButton),
          this.moveWarning,
        ),
      ),
      newButton,
    );
    return this.playPanel;
  }

  private refillInterp(): void {
    if (this.interpDirty) return;
    const doc = defaultInterp(this.formulaInput.value);
    this.interpInput.value = doc === null ? "" : JSON.stringify(doc, null, 1);
  }

  private showSetup(): void {
    this.setupPanel.hidden = false;
    this.playPanel.hidden = true;
  }

  private setError(text: string | null): void {
    this.setupError.hidden = text === null;
    this.setupError.textContent = text ?? "";
  }

  async start(): Promise<void> {
    this.setError(null);
    let interp: unknown;
    const rawInterp = this.interpInput.value.trim();
    try {
      interp = rawInterp === "" ? undefined : JSON.parse(rawInterp);
    } catch (error) {
      this.setError(`interpretation is not valid JSON: ${(error as Error).message}`);
      return;
    }
    try {
      this.formulaTree = parseFormula(this.formulaInput.value);
    } catch {
      this.formulaTree = null; // the service is the authority; it may still reject
    }
    let snapshot: Snapshot;
    try {
      snapshot = await this.client.createSession({
        formula: this.formulaInput.value,
        machine: this.machineInput.value,
        interp,
      });
    } catch (error) {
      this.setError(error instanceof ServiceError ? error.message : String(error));
      return;
    }
    this.sessionId = snapshot.id ?? null;
    this.finished = false;
    this.pendingConfirm = null;
    this.sessionLabel.textContent = this.sessionId ?? "?";
    this.setupPanel.hidden = true;
    this.playPanel.hidden = false;
    this.applySnapshot(snapshot);
    if (this.sessionId !== null) {
      // all later updates arrive through the push stream, in order
      this.stopStream = this.client.streamSession(
        this.sessionId,
        (event) => this.applySnapshot(event),
        (error) => this.setBanner("error", `stream lost: ${error.message}`),
      );
    }
  }

  private setBanner(tone: string, text: string): void {
    this.banner.className = `banner ${tone}`;
    this.banner.textContent = text;
  }

  applySnapshot(snap: Omit<Snapshot, "id">): void {
    this.hints = snap.hints;
    this.finished = snap.status.state === "FINISHED";
    const banner = bannerFor(snap.status, snap.last_machine_moves);
    this.setBanner(banner.tone, banner.text);

    this.runText.textContent = snap.run === "" ? "(empty)" : snap.run;
    this.historyList.replaceChildren();
    const entries = parseRun(snap.run);
    for (const entry of entries) {
      const who = entry.player === "T" ? "⊤" : "⊥";
      this.historyList.append(el("li", {}, `${who} played ${entry.move}`));
    }

    this.hintsList.replaceChildren();
    for (const hint of snap.hints) {
      const button = el("button", { class: "hint", type: "button" }, hint);
      button.addEventListener("click", () => void this.submit([hint]));
      this.hintsList.append(button);
    }

    this.moveInput.disabled = this.finished;
    if (this.finished) this.clearWarning();

    this.treePane.replaceChildren();
    if (this.formulaTree !== null) {
      this.treePane.append(renderTree(annotate(this.formulaTree, entries)));
    } else {
      this.treePane.append(el("li", {}, this.formulaInput.value));
    }
  }

  private clearWarning(): void {
    this.pendingConfirm = null;
    this.moveWarning.hidden = true;
    this.moveWarning.textContent = "";
  }

  async play(entry: string): Promise<void> {
    if (this.finished || this.sessionId === null) return;
    const decision = decideSubmit(entry, this.hints, this.pendingConfirm);
    if (decision.action === "warn") {
      this.pendingConfirm = decision.move;
      this.moveWarning.hidden = false;
      this.moveWarning.textContent = decision.message;
      return;
    }
    this.clearWarning();
    this.moveInput.value = "";
    await this.submit([decision.move]);
  }

  private async submit(moves: string[]): Promise<void> {
    if (this.sessionId === null) return;
    try {
      await this.client.submitMoves(this.sessionId, moves);
      // the snapshot answer is ignored: the stream delivers it in order
    } catch (error) {
      if (error instanceof ServiceError && error.status === 409) return;
      this.setBanner("error", error instanceof Error ? error.message : String(error));
    }
  }

  reset(): void {
    if (this.stopStream) this.stopStream();
    this.stopStream = null;
    if (this.sessionId !== null) void this.client.deleteSession(this.sessionId);
    this.sessionId = null;
    this.interpDirty = false;
    this.refillInterp();
    this.setError(null);
    this.clearWarning();
    this.showSetup();
  }
}

export function initApp(root: HTMLElement, client?: ServiceClient): PlayApp {
  const base = client ?? new ServiceClient(`${location.protocol}//${location.host}`);
  return new PlayApp(root, base);
}

declare global {
  interface Window {
    COL_SERVICE_URL?: string;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const base = window.COL_SERVICE_URL ?? "http://127.0.0.1:8000";
  initApp(document.getElementById("app") as HTMLElement, new ServiceClient(base));
}
