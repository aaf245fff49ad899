// Shapes of the /v1/ API payloads. The UI renders these verbatim; it
// never derives probabilities or percentages on its own.

export interface NodeMetadata {
  id: string;
  label: string;
  kind: "discrete" | "binned_continuous";
  states: string[];
  parents: string[];
  bin_edges?: number[];
}

export interface NetworkMetadata {
  id: string;
  name: string;
  nodes: NodeMetadata[];
}

export interface RegisterResponse {
  id: string;
  name: string;
  node_count: number;
}

export type EvidenceValue = string | number;
export type EvidenceMap = Record<string, EvidenceValue>;

export interface ExplainRequest {
  evidence: EvidenceMap;
  targets: string[];
  level: 1 | 2 | 3;
  config?: {
    metric?: "hellinger" | "kl";
    alpha_ladder?: number[];
    focus_states?: Record<string, string>;
    baseline_label?: string;
    risk_phrases?: Record<string, string>;
    percent_precision?: number;
  };
}

export interface ImpactEntry {
  node: string;
  label: string;
  value: string;
  impact: number;
  significant: boolean;
  category: string | null;
  per_state_delta: number[];
}

export interface IntermediateEvidenceEntry {
  node: string;
  impact: number;
  category: string;
}

export interface IntermediateEntry {
  node: string;
  label: string;
  states: string[];
  prior: number[];
  posterior: number[];
  focus_state: number;
  overall_impact: number;
  evidence: IntermediateEvidenceEntry[];
}

export interface Report {
  report_version: number;
  target: string;
  target_label: string;
  target_states: string[];
  target_focus_state: number;
  metric: string;
  prior: number[];
  posterior: number[];
  overall_impact: number;
  threshold: {
    alpha: number;
    theta: number;
    reference_point: number[];
    ladder_exhausted: boolean;
  };
  level1: ImpactEntry[];
  level2_3: IntermediateEntry[];
  skipped_evidence: string[];
  warnings: { code: string; message: string }[];
}

export interface StructuredGroupItem {
  node: string;
  display: string;
  category: string;
  impact: number;
  impact_rank?: number;
  very_important?: boolean;
}

export interface StructuredGroup {
  key: string;
  header: string;
  items: StructuredGroupItem[];
}

export interface StructuredIntermediate {
  node: string;
  label: string;
  state: string;
  focus_state: number;
  likelihood_percent: string;
  relative_change_percent: number;
  direction: string;
  groups: StructuredGroup[];
}

export interface StructuredExplanation {
  target: {
    node: string;
    label: string;
    state: string;
    likelihood_percent: string;
    relative_change_percent: number;
    direction: string;
    prior_negligible: boolean;
  };
  groups: StructuredGroup[];
  intermediates: StructuredIntermediate[];
}

export interface RenderedTarget {
  target: string;
  text: string;
  structured: StructuredExplanation;
}

export interface ExplainResponse {
  report_version: number;
  reports: Report[];
  rendered: RenderedTarget[];
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
