import type { Report } from "./types.js";

// What-if comparison: which significant findings changed category
// between two scenarios. Appearing in or leaving the significant set
// counts as a change; the category strings come straight from the
// payloads.

export function significantCategories(report: Report): Map<string, string> {
  const categories = new Map<string, string>();
  for (const entry of report.level1) {
    if (entry.significant && entry.category !== null) {
      categories.set(entry.node, entry.category);
    }
  }
  return categories;
}

export function diffCategories(a: Report, b: Report): Set<string> {
  const left = significantCategories(a);
  const right = significantCategories(b);
  const changed = new Set<string>();
  for (const [node, category] of left) {
    if (right.get(node) !== category) {
      changed.add(node);
    }
  }
  for (const [node, category] of right) {
    if (left.get(node) !== category) {
      changed.add(node);
    }
  }
  return changed;
}
