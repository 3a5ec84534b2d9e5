/**
 * Screen wiring: sign-in, the dashboard, and the project workbench.
 *
 * The app layer owns navigation and toasts and nothing else. Domain messages
 * all arrive in API feedback fields and are displayed as received; mutations
 * re-render from server responses (see canvas.ts for the no-optimism rule).
 */

import { ApiClient, GraphDocument, TypeDescriptor } from "./api.js";
import { CanvasController } from "./canvas.js";
import { openContextMenu } from "./contextmenu.js";
import { EditorController } from "./editor.js";
import { renderTableForm } from "./forms.js";
import { renderHistoryPanel } from "./history.js";
import { renderPropertiesPanel } from "./properties.js";
import { renderToolbox } from "./toolbox.js";
import { TourController } from "./tour.js";

export function showToast(root: HTMLElement, feedback: string, kind: "ok" | "error"): void {
  const doc = root.ownerDocument;
  root.querySelector(".toast")?.remove();
  const toast = doc.createElement("div");
  toast.className = `toast toast-${kind}`;
  toast.setAttribute("role", "status");
  toast.textContent = feedback;
  root.appendChild(toast);
}

export class App {
  username: string | null = null;
  projectId: string | null = null;
  canvas: CanvasController | null = null;
  editor: EditorController | null = null;
  tour: TourController | null = null;
  private types: TypeDescriptor[] = [];

  constructor(
    private root: HTMLElement,
    private client: ApiClient,
    private storage: Storage,
  ) {}

  private pane(className: string): HTMLElement {
    const doc = this.root.ownerDocument;
    const node = doc.createElement("div");
    node.className = className;
    this.root.appendChild(node);
    return node;
  }

  // -- sign in

  renderAuth(): void {
    this.root.innerHTML = "";
    const doc = this.root.ownerDocument;
    const form = doc.createElement("form");
    form.className = "auth-form";
    const username = doc.createElement("input");
    username.name = "username";
    username.placeholder = "username";
    const password = doc.createElement("input");
    password.name = "password";
    password.type = "password";
    password.placeholder = "password";
    const signIn = doc.createElement("button");
    signIn.type = "submit";
    signIn.textContent = "Sign in";
    const register = doc.createElement("button");
    register.type = "button";
    register.className = "register-button";
    register.textContent = "Create account";
    form.append(username, password, signIn, register);
    this.root.appendChild(form);

    const finish = async (mode: "login" | "register") => {
      const env = mode === "login"
        ? await this.client.login(username.value, password.value)
        : await this.client.register(username.value, password.value);
      showToast(this.root, env.feedback, env.status);
      if (env.status === "ok") {
        this.username = env.payload.username;
        await this.renderDashboard();
      }
    };
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void finish("login");
    });
    register.addEventListener("click", () => void finish("register"));
  }

  // -- dashboard

  async renderDashboard(): Promise<void> {
    this.root.innerHTML = "";
    const doc = this.root.ownerDocument;
    const dashboard = this.pane("dashboard");
    const heading = doc.createElement("h2");
    heading.textContent = `Projects of ${this.username}`;
    dashboard.appendChild(heading);

    const listing = await this.client.listProjects();
    const list = doc.createElement("ul");
    list.className = "project-list";
    if (listing.status === "ok") {
      for (const project of listing.payload) {
        const item = doc.createElement("li");
        const open = doc.createElement("button");
        open.className = "open-project";
        open.dataset.projectId = project.id;
        open.textContent = project.name;
        open.addEventListener("click", () => void this.openProject(project.id));
        item.appendChild(open);
        list.appendChild(item);
      }
    }
    dashboard.appendChild(list);

    const creator = doc.createElement("form");
    creator.className = "project-creator";
    const name = doc.createElement("input");
    name.name = "project-name";
    name.placeholder = "new project name";
    const create = doc.createElement("button");
    create.type = "submit";
    create.textContent = "Create project";
    creator.append(name, create);
    creator.addEventListener("submit", (event) => {
      event.preventDefault();
      void (async () => {
        const env = await this.client.createProject(name.value);
        showToast(this.root, env.feedback, env.status);
        if (env.status === "ok") await this.openProject(env.payload.id);
      })();
    });
    dashboard.appendChild(creator);

    if (this.username) {
      this.tour = new TourController(this.root, this.storage, this.username);
      this.tour.start();
    }
  }

  // -- project workbench

  async openProject(projectId: string): Promise<void> {
    this.projectId = projectId;
    this.root.innerHTML = "";
    const doc = this.root.ownerDocument;

    const typesEnv = await this.client.listTypes();
    this.types = typesEnv.status === "ok" ? typesEnv.payload : [];

    const tree = this.pane("object-tree");
    await this.refreshObjectTree(tree);

    const formPane = this.pane("form-pane");
    renderTableForm(formPane, this.types, (definition) => {
      void (async () => {
        const env = await this.client.createDdl(projectId, "table", definition);
        showToast(this.root, env.feedback, env.status);
        if (env.status === "ok") await this.refreshObjectTree(tree);
      })();
    });

    const toolboxPane = this.pane("toolbox-pane");
    const canvasPane = this.pane("canvas-pane");
    const propertiesPane = this.pane("properties-pane");

    const graphName = "main";
    const existing = await this.client.getGraph(projectId, graphName);
    let document: GraphDocument;
    if (existing.status === "ok") {
      document = existing.payload.document;
    } else {
      const created = await this.client.createGraph(projectId, graphName);
      if (created.status !== "ok") {
        showToast(this.root, created.feedback, "error");
        return;
      }
      document = created.payload.document;
    }

    this.canvas = new CanvasController(canvasPane, this.client, projectId, graphName, {
      onDocument: () => void this.refreshHistory(),
      onSelectElement: (elementId) => void this.openProperties(propertiesPane, elementId),
    });
    this.canvas.render(document);

    renderToolbox(toolboxPane, (kind) => {
      // click-to-place: drop at a free spot, server clamps as needed
      const step = (this.canvas?.document?.elements.length ?? 0) * 40;
      void this.canvas?.drop(kind, 40 + step, 40 + step);
    });

    const editorPane = this.pane("editor-pane");
    this.editor = new EditorController(editorPane, this.client, projectId);
    this.editor.onApplied = (feedback) => showToast(this.root, feedback, "ok");

    const generate = doc.createElement("button");
    generate.className = "generate-sql";
    generate.textContent = "Generate SQL from canvas";
    generate.addEventListener("click", () => {
      void (async () => {
        const env = await this.client.graphToSql(projectId, graphName);
        if (env.status === "ok") {
          this.editor!.value = env.payload.sql;
          showToast(this.root, env.feedback, "ok");
        } else {
          showToast(this.root, env.feedback, "error");
        }
      })();
    });
    editorPane.appendChild(generate);

    this.pane("history-pane");
    await this.refreshHistory();
  }

  async refreshObjectTree(tree: HTMLElement): Promise<void> {
    if (!this.projectId) return;
    const doc = tree.ownerDocument;
    tree.innerHTML = "";
    const env = await this.client.getCatalog(this.projectId);
    if (env.status !== "ok") {
      showToast(this.root, env.feedback, "error");
      return;
    }
    const sections: [string, { name: string }[]][] = [
      ["database", env.payload.databases],
      ["table", env.payload.tables],
      ["index", env.payload.indexes],
      ["trigger", env.payload.triggers],
    ];
    for (const [kind, objects] of sections) {
      for (const object of objects) {
        const node = doc.createElement("div");
        node.className = "tree-node";
        node.dataset.kind = kind;
        node.dataset.name = object.name;
        node.textContent = object.name;
        node.addEventListener("contextmenu", (event) => {
          event.preventDefault();
          void openContextMenu(tree, this.client, kind, (actionId) => {
            if (actionId.startsWith("drop_")) {
              void (async () => {
                const dropped = await this.client.dropDdl(this.projectId!, kind, object.name);
                showToast(this.root, dropped.feedback, dropped.status);
                if (dropped.status === "ok") await this.refreshObjectTree(tree);
              })();
            }
          });
        });
        tree.appendChild(node);
      }
    }
  }

  async openProperties(pane: HTMLElement, elementId: string): Promise<void> {
    if (!this.projectId || !this.canvas) return;
    const env = await this.client.elementProperties(this.projectId, "main", elementId);
    if (env.status !== "ok") {
      showToast(this.root, env.feedback, "error");
      return;
    }
    renderPropertiesPanel(pane, env.payload, (key, value) => {
      void (async () => {
        const accepted = await this.canvas!.setProperty(elementId, key, value);
        if (accepted) await this.openProperties(pane, elementId);
      })();
    });
  }

  async refreshHistory(): Promise<void> {
    if (!this.projectId) return;
    const pane = this.root.querySelector<HTMLElement>(".history-pane");
    if (!pane) return;
    const env = await this.client.history(this.projectId);
    if (env.status !== "ok") return;
    renderHistoryPanel(pane, env.payload.entries, env.payload.total, env.payload.redoable, {
      onUndo: () => {
        void (async () => {
          const undone = await this.client.undo(this.projectId!);
          showToast(this.root, undone.feedback, undone.status);
          await this.reloadCanvas();
          await this.refreshHistory();
        })();
      },
      onRedo: () => {
        void (async () => {
          const redone = await this.client.redo(this.projectId!);
          showToast(this.root, redone.feedback, redone.status);
          await this.reloadCanvas();
          await this.refreshHistory();
        })();
      },
    });
  }

  private async reloadCanvas(): Promise<void> {
    if (!this.projectId || !this.canvas) return;
    const env = await this.client.getGraph(this.projectId, "main");
    if (env.status === "ok") this.canvas.render(env.payload.document);
  }
}

export function bootstrap(root: HTMLElement, client: ApiClient, storage: Storage): App {
  const app = new App(root, client, storage);
  app.renderAuth();
  return app;
}
