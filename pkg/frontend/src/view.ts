import type {
  ExplainResponse,
  StructuredExplanation,
  StructuredGroup,
} from "./types.js";

// Rendering is a direct projection of the API payload into DOM nodes.
// Every number shown here is a payload field: the UI performs no
// probability arithmetic of its own.

const CATEGORY_LABELS: Record<string, string> = {
  dominant: "supports (very important)",
  consistent: "supports",
  conflicting: "does not support",
  mixed_consistent: "partially supports",
  mixed_conflicting: "partially does not support",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function magnitude(signedPercent: number): string {
  return String(signedPercent).replace(/^-/, "");
}

function changeLine(
  subject: string,
  likelihood: string,
  signedPercent: number,
  direction: string,
): HTMLElement {
  const line = el("p", "change-line");
  line.append(
    `Likelihood of ${subject}: `,
    el("strong", "likelihood", `${likelihood}%`),
    ` (${magnitude(signedPercent)}% ${direction} vs. baseline)`,
  );
  return line;
}

function renderGroup(group: StructuredGroup, changed?: Set<string>): HTMLElement {
  const section = el("section", `factor-group group-${group.key}`);
  section.appendChild(el("h4", "group-header", group.header));
  const list = el("ul", "factor-list");
  if (group.items.length === 0) {
    list.appendChild(el("li", "factor-item none", "NONE"));
  }
  for (const item of group.items) {
    const row = el("li", `factor-item cat-${item.category}`);
    row.dataset.node = item.node;
    if (item.impact_rank !== undefined) {
      row.dataset.rank = String(item.impact_rank);
      row.appendChild(el("span", "rank-badge", `#${item.impact_rank}`));
    }
    row.appendChild(el("span", "factor-display", item.display));
    const label = CATEGORY_LABELS[item.category] ?? item.category;
    row.appendChild(el("span", `category-chip cat-${item.category}`, label));
    if (item.very_important) {
      row.appendChild(el("span", "very-important", "(Very important)"));
    }
    if (changed?.has(item.node)) {
      row.classList.add("changed");
      row.appendChild(el("span", "changed-marker", "changed"));
    }
    list.appendChild(row);
  }
  section.appendChild(list);
  return section;
}

export function renderStructured(
  structured: StructuredExplanation,
  changed?: Set<string>,
): HTMLElement {
  const root = el("article", "explanation");

  const headline = el("header", "headline");
  const subject = `${structured.target.label} = ${structured.target.state}`;
  headline.appendChild(
    changeLine(
      subject,
      structured.target.likelihood_percent,
      structured.target.relative_change_percent,
      structured.target.direction,
    ),
  );
  root.appendChild(headline);

  const level1 = el("section", "level level-1");
  for (const group of structured.groups) {
    level1.appendChild(renderGroup(group, changed));
  }
  root.appendChild(level1);

  if (structured.intermediates.length > 0) {
    const level2 = el("details", "level level-2");
    level2.appendChild(el("summary", "level-title", "Important elements"));
    structured.intermediates.forEach((inter, index) => {
      const block = el("div", "intermediate");
      block.dataset.node = inter.node;
      const title = el("h4", "intermediate-title", `${index + 1}. ${inter.label}`);
      block.appendChild(title);
      block.appendChild(
        changeLine(
          `${inter.label} = ${inter.state}`,
          inter.likelihood_percent,
          inter.relative_change_percent,
          inter.direction,
        ),
      );
      if (inter.groups.length > 0) {
        const level3 = el("details", "level level-3");
        level3.appendChild(el("summary", "level-title", "Factor detail"));
        for (const group of inter.groups) {
          level3.appendChild(renderGroup(group, changed));
        }
        block.appendChild(level3);
      }
      level2.appendChild(block);
    });
    level2.open = false; // level 1 stays the default view
    root.appendChild(level2);
  }

  return root;
}

export function renderExplanation(
  container: HTMLElement,
  payload: ExplainResponse,
  changed?: Set<string>,
): void {
  container.replaceChildren();
  for (const rendered of payload.rendered) {
    container.appendChild(renderStructured(rendered.structured, changed));
  }
}

export function renderPrompt(container: HTMLElement, message: string): void {
  container.replaceChildren(el("p", "prompt", message));
}

export function renderInlineError(container: HTMLElement, message: string): void {
  container.replaceChildren(el("p", "inline-error", message));
}
