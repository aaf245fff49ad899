import { ApiClient } from "./api.js";
import { ComparisonController, ScenarioPane } from "./app.js";
import type { NetworkMetadata } from "./types.js";

// Bootstrap: load a network (upload a document or reuse a registered
// id), generate the evidence form from its metadata, and wire the live
// explanation loop plus the optional what-if pane.

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

async function loadNetwork(api: ApiClient): Promise<NetworkMetadata> {
  const fileInput = byId<HTMLInputElement>("network-file");
  const idInput = byId<HTMLInputElement>("network-id");
  if (fileInput.files && fileInput.files.length > 0) {
    const text = await fileInput.files[0].text();
    const registered = await api.registerNetwork(JSON.parse(text));
    idInput.value = registered.id;
  }
  if (!idInput.value.trim()) {
    throw new Error("choose a network file or enter a registered network id");
  }
  return api.getNetwork(idInput.value.trim());
}

function targetPicker(metadata: NetworkMetadata): HTMLSelectElement {
  const select = byId<HTMLSelectElement>("target-select");
  select.replaceChildren();
  for (const node of metadata.nodes) {
    const option = document.createElement("option");
    option.value = node.id;
    option.textContent = node.label;
    select.appendChild(option);
  }
  return select;
}

function apiBase(): string {
  const meta = document.querySelector<HTMLMetaElement>('meta[name="api-base"]');
  return meta?.content ?? "";
}

function setup(): void {
  const api = new ApiClient(apiBase());
  const status = byId<HTMLParagraphElement>("load-status");
  const workspace = byId<HTMLDivElement>("workspace");

  byId<HTMLButtonElement>("load-button").addEventListener("click", () => {
    void (async () => {
      status.textContent = "loading…";
      try {
        const metadata = await loadNetwork(api);
        status.textContent = `${metadata.name}: ${metadata.nodes.length} nodes`;
        startWorkspace(api, metadata, workspace);
      } catch (error) {
        status.textContent = error instanceof Error ? error.message : String(error);
      }
    })();
  });
}

function startWorkspace(
  api: ApiClient,
  metadata: NetworkMetadata,
  workspace: HTMLDivElement,
): void {
  workspace.hidden = false;
  const targets = targetPicker(metadata);
  const levelInputs = Array.from(
    document.querySelectorAll<HTMLInputElement>('input[name="level"]'),
  );
  const getTargets = () =>
    Array.from(targets.selectedOptions).map((option) => option.value);
  const getLevel = () =>
    (Number(levelInputs.find((input) => input.checked)?.value ?? 3) as 1 | 2 | 3);

  const paneA = byId<HTMLDivElement>("pane-a");
  const paneB = byId<HTMLDivElement>("pane-b");
  paneA.replaceChildren();
  paneB.replaceChildren();

  let comparison: ComparisonController | null = null;
  const onUpdate = () => comparison?.applyHighlights();

  const networkId = byId<HTMLInputElement>("network-id").value.trim();
  const main = new ScenarioPane({
    api,
    networkId,
    metadata,
    container: paneA,
    getTargets,
    getLevel,
    onUpdate,
  });

  const compareToggle = byId<HTMLInputElement>("compare-toggle");
  let whatIf: ScenarioPane | null = null;
  compareToggle.addEventListener("change", () => {
    paneB.hidden = !compareToggle.checked;
    if (compareToggle.checked && whatIf === null) {
      whatIf = new ScenarioPane({
        api,
        networkId,
        metadata,
        container: paneB,
        getTargets,
        getLevel,
        onUpdate,
      });
      comparison = new ComparisonController([main, whatIf]);
    }
    if (!compareToggle.checked) {
      comparison = null;
      main.repaint();
    }
  });

  targets.addEventListener("change", () => {
    void main.refresh();
    void whatIf?.refresh();
  });
  for (const input of levelInputs) {
    input.addEventListener("change", () => {
      void main.refresh();
      void whatIf?.refresh();
    });
  }
  byId<HTMLButtonElement>("clear-button").addEventListener("click", () => {
    main.clear();
  });
}

document.addEventListener("DOMContentLoaded", setup);
