// State machine behind the typing demo, kept free of DOM references so
// it can be exercised directly in tests.
//
// Invariants it enforces:
//   - keystrokes are debounced (250 ms) into at most one request;
//   - at most one request is in flight (newer input aborts the older);
//   - responses carry a sequence number and stale ones are discarded,
//     so rendered suggestions always match the current draft;
//   - suggestions keep exactly the server's order.

import { requestSuggestions, Suggestion } from "./api.js";

export interface UiState {
  draftText: string;
  pendingRequest: boolean;
  suggestions: Suggestion[];
  errorBanner: string | null;
}

export interface StoreOptions {
  baseUrl: string;
  k?: number;
  debounceMs?: number;
  fetchFn?: typeof fetch;
  onChange?: (state: UiState) => void;
}

export class SuggestionStore {
  private state: UiState = {
    draftText: "",
    pendingRequest: false,
    suggestions: [],
    errorBanner: null,
  };

  private readonly baseUrl: string;
  private readonly k: number;
  private readonly debounceMs: number;
  private readonly fetchFn: typeof fetch;
  private readonly onChange?: (state: UiState) => void;

  private debounceHandle: ReturnType<typeof setTimeout> | null = null;
  private controller: AbortController | null = null;
  private requestSeq = 0;

  constructor(options: StoreOptions) {
    this.baseUrl = options.baseUrl;
    this.k = options.k ?? 5;
    this.debounceMs = options.debounceMs ?? 250;
    this.fetchFn = options.fetchFn ?? fetch;
    this.onChange = options.onChange;
  }

  getState(): UiState {
    return { ...this.state, suggestions: [...this.state.suggestions] };
  }

  /** Handle a keystroke: debounce, then request suggestions for the draft. */
  onInput(draftText: string): void {
    this.setState({ draftText });
    if (this.debounceHandle !== null) {
      clearTimeout(this.debounceHandle);
    }
    this.debounceHandle = setTimeout(() => {
      this.debounceHandle = null;
      void this.issueRequest();
    }, this.debounceMs);
  }

  /** Append the chosen suggestion plus a space, then re-query. */
  acceptSuggestion(index: number): void {
    const chosen = this.state.suggestions[index];
    if (!chosen) {
      return; // stale index: suggestions changed under the click
    }
    this.onInput(`${this.state.draftText.replace(/\s+$/, "")} ${chosen.token} `);
  }

  private async issueRequest(): Promise<void> {
    const draft = this.state.draftText;
    if (!draft.trim()) {
      this.controller?.abort();
      this.controller = null;
      this.setState({ pendingRequest: false, suggestions: [], errorBanner: null });
      return;
    }
    const seq = ++this.requestSeq;
    this.controller?.abort();
    this.controller = new AbortController();
    this.setState({ pendingRequest: true, suggestions: [] });
    try {
      const response = await requestSuggestions(
        this.baseUrl, draft, this.k, this.fetchFn, this.controller.signal
      );
      if (seq !== this.requestSeq) {
        return; // superseded while awaiting: discard silently
      }
      this.setState({
        pendingRequest: false,
        suggestions: response.suggestions,
        errorBanner: null,
      });
    } catch (error) {
      if (seq !== this.requestSeq || (error instanceof DOMException && error.name === "AbortError")) {
        return;
      }
      this.setState({
        pendingRequest: false,
        suggestions: [],
        errorBanner: error instanceof Error ? error.message : String(error),
      });
    }
  }

  private setState(patch: Partial<UiState>): void {
    this.state = { ...this.state, ...patch };
    this.onChange?.(this.getState());
  }
}
