/**
 * The element toolbox: one draggable item per canvas element kind.
 *
 * The icon set is a UI decision (the service defines no icons); glyphs lean
 * on relational-algebra notation where one exists. A theme may swap the map
 * wholesale as long as every kind keeps an entry.
 */

export interface ToolboxItem {
  kind: string;
  icon: string;
  label: string;
  description: string;
}

export const TOOLBOX_ITEMS: readonly ToolboxItem[] = [
  {
    kind: "SELECT",
    icon: "π",
    label: "SELECT",
    description: "The output of the query: which columns come back.",
  },
  {
    kind: "TABLE",
    icon: "▦",
    label: "TABLE",
    description: "A table from your catalog that feeds the query.",
  },
  {
    kind: "JOIN",
    icon: "⋈",
    label: "JOIN",
    description: "Combines two tables on a matching column pair.",
  },
  {
    kind: "WHERE",
    icon: "σ",
    label: "WHERE",
    description: "Keeps only the rows that pass a comparison.",
  },
  {
    kind: "GROUP_BY",
    icon: "Γ",
    label: "GROUP BY",
    description: "Collapses rows that share the chosen columns into groups.",
  },
  {
    kind: "HAVING",
    icon: "σᵍ",
    label: "HAVING",
    description: "Filters groups after grouping, e.g. on COUNT or SUM.",
  },
  {
    kind: "ORDER_BY",
    icon: "↕",
    label: "ORDER BY",
    description: "Sorts the final rows by one or more columns.",
  },
];

/** Render the toolbox. Items carry data-kind so drops know what to create. */
export function renderToolbox(
  container: HTMLElement,
  onPick?: (kind: string) => void,
): void {
  container.innerHTML = "";
  container.classList.add("toolbox");
  for (const item of TOOLBOX_ITEMS) {
    const entry = container.ownerDocument.createElement("button");
    entry.className = "toolbox-item";
    entry.dataset.kind = item.kind;
    entry.draggable = true;
    entry.title = item.description;
    const icon = container.ownerDocument.createElement("span");
    icon.className = "toolbox-icon";
    icon.textContent = item.icon;
    const label = container.ownerDocument.createElement("span");
    label.className = "toolbox-label";
    label.textContent = item.label;
    entry.append(icon, label);
    if (onPick) entry.addEventListener("click", () => onPick(item.kind));
    entry.addEventListener("dragstart", (event) => {
      (event as DragEvent).dataTransfer?.setData("text/element-kind", item.kind);
    });
    container.appendChild(entry);
  }
}
