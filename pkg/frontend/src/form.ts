import { NUMERIC_DEBOUNCE_MS, debounce } from "./requests.js";
import type { EvidenceMap, NetworkMetadata, NodeMetadata } from "./types.js";

// Evidence controls are generated purely from the network metadata the
// service returns; nothing about any particular network is hard-coded.

export interface EvidenceForm {
  root: HTMLElement;
  read(): EvidenceMap;
  clear(): void;
  setError(message: string | null): void;
}

function discreteControl(node: NodeMetadata): HTMLSelectElement {
  const select = document.createElement("select");
  select.dataset.node = node.id;
  const blank = document.createElement("option");
  blank.value = "";
  blank.textContent = "— not observed —";
  select.appendChild(blank);
  for (const state of node.states) {
    const option = document.createElement("option");
    option.value = state;
    option.textContent = state;
    select.appendChild(option);
  }
  return select;
}

function numericControl(node: NodeMetadata): HTMLInputElement {
  const input = document.createElement("input");
  input.type = "number";
  input.dataset.node = node.id;
  input.step = "any";
  if (node.bin_edges && node.bin_edges.length > 0) {
    input.min = String(node.bin_edges[0]);
    input.max = String(node.bin_edges[node.bin_edges.length - 1]);
    input.placeholder = `${node.bin_edges[0]} … ${node.bin_edges[node.bin_edges.length - 1]}`;
  }
  return input;
}

export function buildEvidenceForm(
  metadata: NetworkMetadata,
  onEdit: () => void,
): EvidenceForm {
  const root = document.createElement("div");
  root.className = "evidence-form";
  const errorBox = document.createElement("p");
  errorBox.className = "form-error";
  errorBox.hidden = true;
  root.appendChild(errorBox);

  const debouncedEdit = debounce(onEdit, NUMERIC_DEBOUNCE_MS);
  const controls: (HTMLSelectElement | HTMLInputElement)[] = [];

  for (const node of metadata.nodes) {
    const row = document.createElement("label");
    row.className = "evidence-row";
    const caption = document.createElement("span");
    caption.textContent = node.label;
    row.appendChild(caption);

    if (node.kind === "discrete") {
      const select = discreteControl(node);
      select.addEventListener("change", () => onEdit());
      row.appendChild(select);
      controls.push(select);
    } else {
      const input = numericControl(node);
      input.addEventListener("input", () => debouncedEdit());
      input.addEventListener("change", () => onEdit());
      row.appendChild(input);
      controls.push(input);
    }
    root.appendChild(row);
  }

  return {
    root,
    read(): EvidenceMap {
      const evidence: EvidenceMap = {};
      for (const control of controls) {
        const value = control.value.trim();
        if (value === "") {
          continue;
        }
        const nodeId = control.dataset.node as string;
        evidence[nodeId] = control instanceof HTMLInputElement ? Number(value) : value;
      }
      return evidence;
    },
    clear(): void {
      for (const control of controls) {
        control.value = "";
      }
    },
    setError(message: string | null): void {
      errorBox.hidden = message === null;
      errorBox.textContent = message ?? "";
      root.classList.toggle("has-error", message !== null);
    },
  };
}
