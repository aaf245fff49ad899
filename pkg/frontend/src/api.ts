import type {
  ApiErrorBody,
  ExplainRequest,
  ExplainResponse,
  NetworkMetadata,
  RegisterResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function asError(response: Response): Promise<ApiError> {
  let code = "error";
  let message = `request failed with status ${response.status}`;
  try {
    const body = (await response.json()) as ApiErrorBody;
    if (body?.error) {
      code = body.error.code;
      message = body.error.message;
    }
  } catch {
    // non-JSON error body; keep the generic message
  }
  return new ApiError(response.status, code, message);
}

/** Thin typed client for the /v1/ endpoints; the only backend contact. */
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}/v1${path}`, {
      method,
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      throw await asError(response);
    }
    if (response.status === 204) {
      return undefined as T;
    }
    return (await response.json()) as T;
  }

  registerNetwork(document: unknown): Promise<RegisterResponse> {
    return this.request("POST", "/networks", document);
  }

  getNetwork(id: string): Promise<NetworkMetadata> {
    return this.request("GET", `/networks/${encodeURIComponent(id)}`);
  }

  explain(id: string, body: ExplainRequest): Promise<ExplainResponse> {
    return this.request("POST", `/networks/${encodeURIComponent(id)}/explain`, body);
  }

  deleteNetwork(id: string): Promise<void> {
    return this.request("DELETE", `/networks/${encodeURIComponent(id)}`);
  }
}
