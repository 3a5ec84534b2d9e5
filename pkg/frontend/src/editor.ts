/**
 * The SQL text editor pane: highlighting, clause navigation, advisor tips
 * with one-click rewrites, completion, and the plan comparison view.
 *
 * The editor displays but never judges. Parse errors, tips, and plan numbers
 * are server sentences shown verbatim; the keyword list below exists only to
 * color text and has no effect on what is accepted. Rewrites whose
 * equivalence is not "preserving" get a confirmation step that quotes the
 * server's own caveat before anything is applied.
 */

import { ApiClient, PlanPayload, Tip } from "./api.js";

// display coloring only; the service decides what parses
const DISPLAY_KEYWORDS = new Set([
  "select", "distinct", "from", "where", "group", "by", "having", "order",
  "asc", "desc", "and", "or", "not", "as", "on", "inner", "left", "right",
  "full", "outer", "join", "union", "all", "intersect", "except", "null",
]);

/** Wrap keywords, strings, and numbers in spans for display. */
export function highlight(sql: string): string {
  const escape = (piece: string) =>
    piece.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
  const pattern = /('(?:[^']|'')*')|(\b\d+(?:\.\d+)?\b)|([A-Za-z_][A-Za-z_0-9]*)/g;
  let out = "";
  let last = 0;
  for (const match of sql.matchAll(pattern)) {
    out += escape(sql.slice(last, match.index));
    const [whole, text, number, word] = match;
    if (text !== undefined) out += `<span class="tok-string">${escape(whole)}</span>`;
    else if (number !== undefined) out += `<span class="tok-number">${escape(whole)}</span>`;
    else if (word !== undefined && DISPLAY_KEYWORDS.has(word.toLowerCase())) {
      out += `<span class="tok-keyword">${escape(whole)}</span>`;
    } else out += escape(whole);
    last = match.index! + whole.length;
  }
  return out + escape(sql.slice(last));
}

const EQUIVALENCE_BADGES: Record<string, string> = {
  preserving: "same results",
  altering_needs_confirmation: "may change results",
  approximate: "approximate",
};

export class EditorController {
  readonly textarea: HTMLTextAreaElement;
  private tipsPane: HTMLElement;
  private errorPane: HTMLElement;
  private clausePane: HTMLElement;
  private planPane: HTMLElement;
  private completionPane: HTMLElement;
  private lastFingerprint: string | null = null;
  /** Fired with the server's feedback after a rewrite lands. */
  onApplied?: (feedback: string) => void;

  constructor(
    private container: HTMLElement,
    private client: ApiClient,
    private projectId: string,
  ) {
    const doc = container.ownerDocument;
    container.innerHTML = "";
    container.classList.add("editor");
    this.textarea = doc.createElement("textarea");
    this.textarea.className = "editor-input";
    this.clausePane = doc.createElement("div");
    this.clausePane.className = "clause-nav";
    this.errorPane = doc.createElement("div");
    this.errorPane.className = "editor-error";
    this.errorPane.setAttribute("role", "alert");
    this.tipsPane = doc.createElement("div");
    this.tipsPane.className = "tips-pane";
    this.planPane = doc.createElement("div");
    this.planPane.className = "plan-pane";
    this.completionPane = doc.createElement("div");
    this.completionPane.className = "completion-pane";
    container.append(
      this.clausePane, this.textarea, this.completionPane,
      this.errorPane, this.tipsPane, this.planPane,
    );
  }

  get value(): string {
    return this.textarea.value;
  }

  set value(sql: string) {
    this.textarea.value = sql;
  }

  /** Parse on the server; render clause buttons or the error verbatim. */
  async check(): Promise<boolean> {
    const env = await this.client.parseSql(this.projectId, this.value);
    if (env.status !== "ok") {
      this.errorPane.textContent = env.feedback;
      this.clausePane.innerHTML = "";
      return false;
    }
    this.errorPane.textContent = "";
    this.renderClauseNav(env.payload.clause_spans);
    return true;
  }

  private renderClauseNav(spans: Record<string, [number, number]>): void {
    const doc = this.container.ownerDocument;
    this.clausePane.innerHTML = "";
    for (const [clause, [start, end]] of Object.entries(spans)) {
      const jump = doc.createElement("button");
      jump.className = "clause-jump";
      jump.dataset.clause = clause;
      jump.textContent = clause;
      jump.addEventListener("click", () => {
        this.textarea.focus();
        this.textarea.setSelectionRange(start, end);
      });
      this.clausePane.appendChild(jump);
    }
  }

  /** Ask the advisor and list its tips beside the editor. */
  async analyze(): Promise<Tip[]> {
    const env = await this.client.analyzeSql(this.projectId, this.value);
    const doc = this.container.ownerDocument;
    this.tipsPane.innerHTML = "";
    if (env.status !== "ok") {
      this.errorPane.textContent = env.feedback;
      return [];
    }
    this.errorPane.textContent = "";
    this.lastFingerprint = env.payload.fingerprint;
    const note = doc.createElement("p");
    note.className = "tips-feedback";
    note.textContent = env.feedback;
    this.tipsPane.appendChild(note);
    for (const tip of env.payload.tips) {
      const card = doc.createElement("div");
      card.className = "tip-card";
      card.dataset.rule = tip.rule;
      const badge = doc.createElement("span");
      badge.className = `tip-badge tip-${tip.equivalence}`;
      badge.textContent = EQUIVALENCE_BADGES[tip.equivalence] ?? tip.equivalence;
      const message = doc.createElement("p");
      message.className = "tip-message";
      message.textContent = tip.message;
      card.append(badge, message);
      if (tip.rewritten_sql !== null) {
        const preview = doc.createElement("pre");
        preview.className = "tip-preview";
        preview.textContent = tip.rewritten_sql;
        const apply = doc.createElement("button");
        apply.className = "tip-apply";
        apply.textContent = "Apply rewrite";
        apply.addEventListener("click", () => this.requestApply(tip));
        card.append(preview, apply);
      }
      this.tipsPane.appendChild(card);
    }
    return env.payload.tips;
  }

  /** Preserving rewrites apply at once; anything else asks first, quoting
      the server's caveat. */
  requestApply(tip: Tip): void {
    if (tip.equivalence === "preserving") {
      void this.applyTip(tip);
      return;
    }
    const doc = this.container.ownerDocument;
    this.tipsPane.querySelector(".confirm-dialog")?.remove();
    const dialog = doc.createElement("div");
    dialog.className = "confirm-dialog";
    dialog.setAttribute("role", "alertdialog");
    const caveat = doc.createElement("p");
    caveat.className = "confirm-caveat";
    caveat.textContent = tip.message;
    const accept = doc.createElement("button");
    accept.className = "confirm-accept";
    accept.textContent = "Apply anyway";
    accept.addEventListener("click", () => {
      dialog.remove();
      void this.applyTip(tip);
    });
    const decline = doc.createElement("button");
    decline.className = "confirm-decline";
    decline.textContent = "Keep my query";
    decline.addEventListener("click", () => dialog.remove());
    dialog.append(caveat, accept, decline);
    this.tipsPane.appendChild(dialog);
  }

  async applyTip(tip: Tip): Promise<void> {
    const env = await this.client.applyRewrite(
      this.projectId, this.value, tip.rule, this.lastFingerprint ?? tip.fingerprint);
    if (env.status !== "ok") {
      this.errorPane.textContent = env.feedback;
      return;
    }
    this.value = env.payload.sql;
    this.errorPane.textContent = "";
    this.onApplied?.(env.feedback);
    await this.analyze();
  }

  /** Side-by-side plan alternatives with cost bars. */
  async showPlan(): Promise<PlanPayload | null> {
    const env = await this.client.planSql(this.projectId, this.value);
    const doc = this.container.ownerDocument;
    this.planPane.innerHTML = "";
    if (env.status !== "ok") {
      this.errorPane.textContent = env.feedback;
      return null;
    }
    const note = doc.createElement("p");
    note.className = "plan-feedback";
    note.textContent = env.feedback;
    this.planPane.appendChild(note);

    const costs = [
      { label: "chosen plan", text: env.payload.plan_text, cost: env.payload.estimated_cost },
      ...env.payload.alternatives.map((alt, i) => ({
        label: `alternative ${i + 1}`, text: alt.plan_text, cost: alt.total_cost,
      })),
    ];
    const worst = Math.max(...costs.map((c) => c.cost));
    for (const entry of costs) {
      const column = doc.createElement("div");
      column.className = "plan-column";
      const title = doc.createElement("h4");
      title.textContent = `${entry.label}: cost ${entry.cost}`;
      const bar = doc.createElement("div");
      bar.className = "cost-bar";
      bar.style.width = `${Math.round((entry.cost / worst) * 100)}%`;
      const tree = doc.createElement("pre");
      tree.textContent = entry.text;
      column.append(title, bar, tree);
      this.planPane.appendChild(column);
    }
    const timings = doc.createElement("p");
    timings.className = "plan-timings";
    timings.textContent =
      `planning ${env.payload.estimated_planning_time_ms} ms, ` +
      `execution ${env.payload.estimated_execution_time_ms} ms`;
    this.planPane.appendChild(timings);
    return env.payload;
  }

  /** Completion popup at the current cursor. */
  async requestCompletion(): Promise<void> {
    const cursor = this.textarea.selectionStart ?? this.value.length;
    const env = await this.client.complete(this.projectId, this.value, cursor);
    const doc = this.container.ownerDocument;
    this.completionPane.innerHTML = "";
    if (env.status !== "ok") return;
    const start = env.payload.replacement_start;
    for (const candidate of env.payload.candidates) {
      const pick = doc.createElement("button");
      pick.className = "completion-candidate";
      pick.dataset.kind = candidate.kind;
      pick.textContent = candidate.text;
      pick.title = candidate.explanation;
      pick.addEventListener("click", () => {
        this.value = this.value.slice(0, start) + candidate.text + this.value.slice(cursor);
        this.completionPane.innerHTML = "";
        this.textarea.focus();
      });
      this.completionPane.appendChild(pick);
    }
  }
}
