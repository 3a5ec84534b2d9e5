/**
 * The first-run tour. One callout at a time, following the same scaffolding
 * order a new user works through anyway: account, database, table, query.
 * Dismissal is remembered per user so the tour never nags twice.
 */

export interface TourStep {
  id: string;
  text: string;
}

export const TOUR_STEPS: readonly TourStep[] = [
  { id: "account", text: "You are signed in. Everything you build lives in your own projects." },
  { id: "database", text: "Start by creating a database from the dashboard." },
  { id: "table", text: "Give it a table. Hover any data type to learn what it stores." },
  { id: "query", text: "Drag elements from the toolbox onto the canvas to build your first query." },
];

const storageKey = (username: string) => `tour-dismissed:${username}`;

export function isTourDismissed(storage: Storage, username: string): boolean {
  return storage.getItem(storageKey(username)) === "yes";
}

export function dismissTour(storage: Storage, username: string): void {
  storage.setItem(storageKey(username), "yes");
}

export class TourController {
  private step = 0;

  constructor(
    private container: HTMLElement,
    private storage: Storage,
    private username: string,
  ) {}

  /** Show the tour unless this user already dismissed it. */
  start(): void {
    if (isTourDismissed(this.storage, this.username)) return;
    this.step = 0;
    this.renderStep();
  }

  next(): void {
    this.step += 1;
    if (this.step >= TOUR_STEPS.length) {
      this.dismiss();
      return;
    }
    this.renderStep();
  }

  dismiss(): void {
    dismissTour(this.storage, this.username);
    this.container.querySelector(".tour-callout")?.remove();
  }

  private renderStep(): void {
    const doc = this.container.ownerDocument;
    // never more than one callout on screen
    this.container.querySelector(".tour-callout")?.remove();
    const callout = doc.createElement("div");
    callout.className = "tour-callout";
    callout.dataset.step = TOUR_STEPS[this.step].id;
    const text = doc.createElement("p");
    text.textContent = TOUR_STEPS[this.step].text;
    const next = doc.createElement("button");
    next.className = "tour-next";
    next.textContent = this.step === TOUR_STEPS.length - 1 ? "Done" : "Next";
    next.addEventListener("click", () => this.next());
    const skip = doc.createElement("button");
    skip.className = "tour-dismiss";
    skip.textContent = "Don't show this again";
    skip.addEventListener("click", () => this.dismiss());
    callout.append(text, next, skip);
    this.container.appendChild(callout);
  }
}
