/**
 * The history panel: the project's action log, newest first, with live
 * undo and redo buttons. Labels come straight from the server's entries.
 */

import { HistoryEntry } from "./api.js";

export interface HistoryHandlers {
  onUndo: () => void;
  onRedo: () => void;
}

export function renderHistoryPanel(
  container: HTMLElement,
  entries: HistoryEntry[],
  total: number,
  redoable: number,
  handlers: HistoryHandlers,
): void {
  const doc = container.ownerDocument;
  container.innerHTML = "";
  container.classList.add("history-panel");

  const controls = doc.createElement("div");
  controls.className = "history-controls";
  const undoButton = doc.createElement("button");
  undoButton.className = "undo-button";
  undoButton.textContent = "Undo";
  undoButton.disabled = total === 0;
  undoButton.addEventListener("click", handlers.onUndo);
  const redoButton = doc.createElement("button");
  redoButton.className = "redo-button";
  redoButton.textContent = "Redo";
  redoButton.disabled = redoable === 0;
  redoButton.addEventListener("click", handlers.onRedo);
  controls.append(undoButton, redoButton);
  container.appendChild(controls);

  const list = doc.createElement("ol");
  list.className = "history-entries";
  // the server sends newest first; keep that order on screen
  for (const entry of entries) {
    const item = doc.createElement("li");
    item.dataset.sequence = String(entry.sequence);
    const label = doc.createElement("span");
    label.className = "history-label";
    label.textContent = entry.label;
    const when = doc.createElement("time");
    when.dateTime = entry.timestamp;
    when.textContent = entry.timestamp;
    item.append(label, when);
    list.appendChild(item);
  }
  container.appendChild(list);
}
