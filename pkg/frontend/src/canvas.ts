/**
 * The query canvas: renders the server's graph document and turns gestures
 * into API mutations.
 *
 * Two rules shape everything here. First, the canvas never updates itself
 * optimistically: each gesture sends exactly one mutation and the canvas
 * re-renders from the document in the server's response, so what you see is
 * always what the server has. Second, when the server rejects a gesture the
 * UI shows the server's feedback sentence inline, word for word; this module
 * writes no validation messages of its own.
 */

import { ApiClient, Envelope, GraphDocument } from "./api.js";

export interface CanvasCallbacks {
  /** Fired after any accepted mutation with the fresh document. */
  onDocument?: (document: GraphDocument) => void;
  /** Fired when an element is clicked, to open the properties panel. */
  onSelectElement?: (elementId: string) => void;
}

export class CanvasController {
  document: GraphDocument | null = null;

  constructor(
    private container: HTMLElement,
    private client: ApiClient,
    private projectId: string,
    private graphName: string,
    private callbacks: CanvasCallbacks = {},
  ) {}

  /** Replace the rendered canvas with the given server document. */
  render(document: GraphDocument): void {
    this.document = document;
    const doc = this.container.ownerDocument;
    this.container.innerHTML = "";
    this.container.classList.add("canvas");

    // connection lines first so elements sit on top
    const lines = doc.createElementNS("http://www.w3.org/2000/svg", "svg");
    lines.setAttribute("class", "canvas-wires");
    lines.setAttribute("width", String(document.canvas.width));
    lines.setAttribute("height", String(document.canvas.height));
    const at = new Map(document.elements.map((e) => [e.id, e]));
    for (const wire of document.connections) {
      const from = at.get(wire.from);
      const to = at.get(wire.to);
      if (!from || !to) continue;
      const line = doc.createElementNS("http://www.w3.org/2000/svg", "line");
      line.setAttribute("x1", String(from.x + 60));
      line.setAttribute("y1", String(from.y + 30));
      line.setAttribute("x2", String(to.x + 60));
      line.setAttribute("y2", String(to.y + 30));
      line.setAttribute("data-from", wire.from);
      line.setAttribute("data-to", wire.to);
      lines.appendChild(line);
    }
    this.container.appendChild(lines);

    for (const element of document.elements) {
      const node = doc.createElement("div");
      node.className = "canvas-element";
      node.dataset.elementId = element.id;
      node.dataset.kind = element.kind;
      node.style.left = `${element.x}px`;
      node.style.top = `${element.y}px`;
      node.textContent = element.kind.replace("_", " ");
      node.addEventListener("click", () => this.callbacks.onSelectElement?.(element.id));
      this.container.appendChild(node);
    }
  }

  /** Show the server's rejection next to the offending element. */
  showRejection(feedback: string, elementId?: string): void {
    this.clearRejection();
    const callout = this.container.ownerDocument.createElement("div");
    callout.className = "canvas-callout";
    callout.setAttribute("role", "alert");
    callout.textContent = feedback;
    if (elementId) {
      const anchor = this.container.querySelector<HTMLElement>(
        `[data-element-id="${elementId}"]`);
      if (anchor) {
        callout.dataset.anchor = elementId;
        callout.style.left = anchor.style.left;
        callout.style.top = `calc(${anchor.style.top} + 64px)`;
      }
    }
    this.container.appendChild(callout);
  }

  clearRejection(): void {
    this.container.querySelector(".canvas-callout")?.remove();
  }

  private settle(env: Envelope<{ document: GraphDocument }>, anchor?: string): boolean {
    this.clearRejection();
    if (env.status === "ok") {
      this.render(env.payload.document);
      this.callbacks.onDocument?.(env.payload.document);
      return true;
    }
    this.showRejection(env.feedback, anchor);
    return false;
  }

  async drop(kind: string, x: number, y: number): Promise<string | null> {
    const env = await this.client.dropElement(this.projectId, this.graphName, kind, x, y);
    if (this.settle(env)) {
      return (env.payload as { element_id: string }).element_id;
    }
    return null;
  }

  async move(elementId: string, x: number, y: number): Promise<boolean> {
    const env = await this.client.moveElement(this.projectId, this.graphName, elementId, x, y);
    return this.settle(env, elementId);
  }

  async connectElements(from: string, to: string): Promise<boolean> {
    const env = await this.client.connect(this.projectId, this.graphName, from, to);
    return this.settle(env, from);
  }

  async disconnectElements(from: string, to: string): Promise<boolean> {
    const env = await this.client.disconnect(this.projectId, this.graphName, from, to);
    return this.settle(env, from);
  }

  async removeElement(elementId: string): Promise<boolean> {
    const env = await this.client.deleteElement(this.projectId, this.graphName, elementId);
    return this.settle(env, elementId);
  }

  async setProperty(elementId: string, key: string, value: unknown): Promise<boolean> {
    const env = await this.client.setProperty(
      this.projectId, this.graphName, elementId, key, value);
    return this.settle(env, elementId);
  }
}
