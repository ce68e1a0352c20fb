// Thin typed client for the suggestion service.

export interface Suggestion {
  token: string;
  probability: number;
}

export interface ModelInfo {
  corpus_digest: string;
  n: number;
  embedding_source: string;
  vocab_size?: number;
}

export interface SuggestResponse {
  suggestions: Suggestion[];
  model_info: ModelInfo;
}

/** Service base URL: `?api=http://host:port` query parameter wins,
 *  otherwise the local default. */
export function resolveBaseUrl(search: string, fallback = "http://localhost:8080"): string {
  const api = new URLSearchParams(search).get("api");
  return (api ?? fallback).replace(/\/+$/, "");
}

export async function requestSuggestions(
  baseUrl: string,
  context: string,
  k: number,
  fetchFn: typeof fetch,
  signal?: AbortSignal
): Promise<SuggestResponse> {
  const response = await fetchFn(`${baseUrl}/suggest`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ context, k }),
    signal,
  });
  if (!response.ok) {
    let detail = `request failed (${response.status})`;
    try {
      const body = (await response.json()) as { error?: string };
      if (body.error) {
        detail = body.error;
      }
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new Error(detail);
  }
  return (await response.json()) as SuggestResponse;
}

export async function fetchModelInfo(baseUrl: string, fetchFn: typeof fetch): Promise<ModelInfo> {
  const response = await fetchFn(`${baseUrl}/model`);
  if (!response.ok) {
    throw new Error(`model info unavailable (${response.status})`);
  }
  return (await response.json()) as ModelInfo;
}
