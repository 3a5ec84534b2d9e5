/**
 * The dynamic properties panel. Everything shown comes from the server's
 * property schema for the selected element: entry order, allowed values,
 * required flags, and help text. The panel decides only widget shape per
 * value kind: choice -> select, multi_choice -> checkbox list,
 * text -> input, flag -> single checkbox.
 */

import { PropertySchema } from "./api.js";

export function renderPropertiesPanel(
  container: HTMLElement,
  schema: PropertySchema,
  onSet: (key: string, value: unknown) => void,
): void {
  const doc = container.ownerDocument;
  container.innerHTML = "";
  container.classList.add("properties-panel");

  const heading = doc.createElement("h3");
  heading.textContent = `${schema.kind.replace("_", " ")} ${schema.element_id}`;
  container.appendChild(heading);

  for (const entry of schema.entries) {
    const row = doc.createElement("label");
    row.className = "property-row";
    row.dataset.key = entry.key;
    const caption = doc.createElement("span");
    caption.className = "property-name";
    caption.textContent = entry.required ? `${entry.key} *` : entry.key;
    caption.title = entry.help_text;
    row.appendChild(caption);

    const current = schema.current[entry.key];

    if (entry.value_kind === "choice") {
      const select = doc.createElement("select");
      const blank = doc.createElement("option");
      blank.value = "";
      blank.textContent = "(choose)";
      select.appendChild(blank);
      for (const option of entry.allowed ?? []) {
        const el = doc.createElement("option");
        el.value = option;
        el.textContent = option;
        if (current === option) el.selected = true;
        select.appendChild(el);
      }
      select.addEventListener("change", () => {
        if (select.value !== "") onSet(entry.key, select.value);
      });
      row.appendChild(select);
    } else if (entry.value_kind === "multi_choice") {
      const group = doc.createElement("div");
      group.className = "property-multi";
      const picked = new Set(Array.isArray(current) ? (current as string[]) : []);
      for (const option of entry.allowed ?? []) {
        const wrap = doc.createElement("label");
        const box = doc.createElement("input");
        box.type = "checkbox";
        box.value = option;
        box.checked = picked.has(option);
        box.addEventListener("change", () => {
          const chosen = Array.from(
            group.querySelectorAll<HTMLInputElement>("input:checked"),
          ).map((input) => input.value);
          onSet(entry.key, chosen);
        });
        wrap.append(box, doc.createTextNode(option));
        group.appendChild(wrap);
      }
      row.appendChild(group);
    } else if (entry.value_kind === "flag") {
      const box = doc.createElement("input");
      box.type = "checkbox";
      box.checked = current === true;
      box.addEventListener("change", () => onSet(entry.key, box.checked));
      row.appendChild(box);
    } else {
      const input = doc.createElement("input");
      input.type = "text";
      if (current !== undefined && current !== null) input.value = String(current);
      input.addEventListener("change", () => onSet(entry.key, input.value));
      row.appendChild(input);
    }

    const help = doc.createElement("small");
    help.className = "property-help";
    help.textContent = entry.help_text;
    row.appendChild(help);
    container.appendChild(row);
  }
}
