import { ApiError } from "./api.js";
import { diffCategories } from "./compare.js";
import { buildEvidenceForm, type EvidenceForm } from "./form.js";
import { RequestGate } from "./requests.js";
import type { ExplainRequest, ExplainResponse, NetworkMetadata } from "./types.js";
import { renderExplanation, renderInlineError, renderPrompt } from "./view.js";

/** The one slice of the API a scenario pane needs. */
export interface ExplainApi {
  explain(id: string, body: ExplainRequest): Promise<ExplainResponse>;
}

export interface PaneOptions {
  api: ExplainApi;
  networkId: string;
  metadata: NetworkMetadata;
  container: HTMLElement;
  getTargets: () => string[];
  getLevel: () => 1 | 2 | 3;
  onUpdate?: () => void;
}

const ENTER_EVIDENCE_PROMPT =
  "Enter evidence to see the prediction and its explanation.";

/**
 * One evidence-entry scenario: a generated form plus the explanation
 * view it drives. Every evidence edit issues exactly one explain call;
 * responses superseded by a newer edit are discarded unseen.
 */
export class ScenarioPane {
  readonly form: EvidenceForm;
  readonly root: HTMLElement;
  lastResponse: ExplainResponse | null = null;
  private readonly gate = new RequestGate();
  private readonly output: HTMLElement;

  constructor(private readonly options: PaneOptions) {
    this.root = options.container;
    this.form = buildEvidenceForm(options.metadata, () => {
      void this.refresh();
    });
    this.output = document.createElement("div");
    this.output.className = "explanation-output";
    this.root.append(this.form.root, this.output);
    renderPrompt(this.output, ENTER_EVIDENCE_PROMPT);
  }

  /** Re-query the service for the current form state. */
  async refresh(): Promise<void> {
    const evidence = this.form.read();
    this.form.setError(null);
    if (Object.keys(evidence).length === 0) {
      // An empty scenario has nothing to explain; show the prior prompt
      // without calling the service.
      this.lastResponse = null;
      renderPrompt(this.output, ENTER_EVIDENCE_PROMPT);
      this.options.onUpdate?.();
      return;
    }
    const request: ExplainRequest = {
      evidence,
      targets: this.options.getTargets(),
      level: this.options.getLevel(),
    };
    const seq = this.gate.next();
    let payload: ExplainResponse;
    try {
      payload = await this.options.api.explain(this.options.networkId, request);
    } catch (error) {
      if (!this.gate.isCurrent(seq)) {
        return; // a newer edit is already in flight
      }
      const message =
        error instanceof ApiError ? error.message : "service unreachable";
      this.form.setError(message);
      renderInlineError(this.output, message);
      this.lastResponse = null;
      this.options.onUpdate?.();
      return;
    }
    if (!this.gate.isCurrent(seq)) {
      return; // stale response: a newer edit superseded this request
    }
    this.lastResponse = payload;
    renderExplanation(this.output, payload);
    this.options.onUpdate?.();
  }

  /** Re-project the last response with what-if highlights applied. */
  repaint(changed?: Set<string>): void {
    if (this.lastResponse) {
      renderExplanation(this.output, this.lastResponse, changed);
    }
  }

  clear(): void {
    this.form.clear();
    void this.refresh();
  }
}

/**
 * Two-scenario what-if comparison. Each pane queries independently;
 * once both have a response, findings whose category differs between
 * the scenarios are highlighted in both.
 */
export class ComparisonController {
  constructor(private readonly panes: [ScenarioPane, ScenarioPane]) {}

  applyHighlights(): Set<string> {
    const [a, b] = this.panes;
    if (!a.lastResponse || !b.lastResponse) {
      a.repaint();
      b.repaint();
      return new Set();
    }
    const changed = diffCategories(
      a.lastResponse.reports[0],
      b.lastResponse.reports[0],
    );
    a.repaint(changed);
    b.repaint(changed);
    return changed;
  }
}
