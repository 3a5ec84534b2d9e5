/**
 * Creation forms with progressive disclosure.
 *
 * A fresh table form shows the primary fields only: name, description, and
 * the column list. Schema choice and table constraints stay behind one
 * "Advanced" expander so a first-timer sees a small, finishable form.
 * Validation is the server's job: submit sends the definition as typed and
 * whatever feedback comes back is displayed verbatim.
 */

import { TypeDescriptor } from "./api.js";

export interface DisclosureState {
  advancedShown: boolean;
}

export interface TableFormHandle {
  state: DisclosureState;
  /** Collect the definition exactly as entered. */
  read(): {
    name: string;
    description: string;
    schema?: string;
    columns: { name: string; data_type: string }[];
  };
  addColumnRow(): void;
}

export function renderTableForm(
  container: HTMLElement,
  types: TypeDescriptor[],
  onSubmit: (definition: ReturnType<TableFormHandle["read"]>) => void,
): TableFormHandle {
  const doc = container.ownerDocument;
  container.innerHTML = "";
  container.classList.add("table-form");
  const state: DisclosureState = { advancedShown: false };

  const form = doc.createElement("form");
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    onSubmit(handle.read());
  });

  const primary = doc.createElement("fieldset");
  primary.dataset.section = "primary";

  const nameRow = doc.createElement("label");
  nameRow.textContent = "Table name";
  const nameInput = doc.createElement("input");
  nameInput.name = "name";
  nameInput.type = "text";
  nameRow.appendChild(nameInput);
  primary.appendChild(nameRow);

  const descriptionRow = doc.createElement("label");
  descriptionRow.textContent = "Description";
  const descriptionInput = doc.createElement("input");
  descriptionInput.name = "description";
  descriptionInput.type = "text";
  descriptionRow.appendChild(descriptionInput);
  primary.appendChild(descriptionRow);

  const columns = doc.createElement("div");
  columns.className = "column-rows";
  primary.appendChild(columns);

  function addColumnRow(): void {
    const row = doc.createElement("div");
    row.className = "column-row";
    const columnName = doc.createElement("input");
    columnName.type = "text";
    columnName.className = "column-name";
    columnName.placeholder = "column name";
    const typePick = doc.createElement("select");
    typePick.className = "column-type";
    for (const descriptor of types) {
      const option = doc.createElement("option");
      option.value = descriptor.name;
      option.textContent = descriptor.name;
      // the learn-by-hovering moment: every type explains itself
      option.title = descriptor.tooltip;
      typePick.appendChild(option);
    }
    typePick.title = types.find((t) => t.name === typePick.value)?.tooltip ?? "";
    typePick.addEventListener("change", () => {
      typePick.title = types.find((t) => t.name === typePick.value)?.tooltip ?? "";
    });
    row.append(columnName, typePick);
    columns.appendChild(row);
  }

  const addColumn = doc.createElement("button");
  addColumn.type = "button";
  addColumn.className = "add-column";
  addColumn.textContent = "Add column";
  addColumn.addEventListener("click", addColumnRow);
  primary.appendChild(addColumn);
  form.appendChild(primary);

  const expander = doc.createElement("button");
  expander.type = "button";
  expander.className = "advanced-expander";
  expander.textContent = "Advanced";
  expander.setAttribute("aria-expanded", "false");
  form.appendChild(expander);

  const advanced = doc.createElement("fieldset");
  advanced.dataset.section = "advanced";
  advanced.hidden = true;

  const schemaRow = doc.createElement("label");
  schemaRow.textContent = "Schema";
  const schemaInput = doc.createElement("input");
  schemaInput.name = "schema";
  schemaInput.type = "text";
  schemaInput.placeholder = "public";
  schemaRow.appendChild(schemaInput);
  advanced.appendChild(schemaRow);
  form.appendChild(advanced);

  expander.addEventListener("click", () => {
    state.advancedShown = !state.advancedShown;
    advanced.hidden = !state.advancedShown;
    expander.setAttribute("aria-expanded", String(state.advancedShown));
  });

  const submit = doc.createElement("button");
  submit.type = "submit";
  submit.textContent = "Create table";
  form.appendChild(submit);

  container.appendChild(form);
  addColumnRow();

  const handle: TableFormHandle = {
    state,
    addColumnRow,
    read() {
      const entries = Array.from(columns.querySelectorAll<HTMLElement>(".column-row")).map(
        (row) => ({
          name: row.querySelector<HTMLInputElement>(".column-name")!.value.trim(),
          data_type: row.querySelector<HTMLSelectElement>(".column-type")!.value,
        }),
      ).filter((column) => column.name !== "");
      const definition: ReturnType<TableFormHandle["read"]> = {
        name: nameInput.value.trim(),
        description: descriptionInput.value.trim(),
        columns: entries,
      };
      if (state.advancedShown && schemaInput.value.trim() !== "") {
        definition.schema = schemaInput.value.trim();
      }
      return definition;
    },
  };
  return handle;
}
