/**
 * Right-click menus for catalog objects. Menu contents are never hardcoded:
 * the service's context-actions endpoint decides what a database, table, or
 * column offers, and the menu renders exactly that list.
 */

import { ApiClient } from "./api.js";

export async function openContextMenu(
  container: HTMLElement,
  client: ApiClient,
  objectKind: string,
  onAction: (actionId: string) => void,
): Promise<void> {
  closeContextMenu(container);
  const env = await client.contextActions(objectKind);
  const doc = container.ownerDocument;
  const menu = doc.createElement("ul");
  menu.className = "context-menu";
  menu.dataset.kind = objectKind;
  if (env.status !== "ok") {
    const item = doc.createElement("li");
    item.className = "context-menu-error";
    item.textContent = env.feedback;
    menu.appendChild(item);
  } else {
    for (const action of env.payload.actions) {
      const item = doc.createElement("li");
      const button = doc.createElement("button");
      button.dataset.actionId = action.id;
      button.textContent = action.label;
      button.addEventListener("click", () => {
        closeContextMenu(container);
        onAction(action.id);
      });
      item.appendChild(button);
      menu.appendChild(item);
    }
  }
  container.appendChild(menu);
}

export function closeContextMenu(container: HTMLElement): void {
  container.querySelector(".context-menu")?.remove();
}
