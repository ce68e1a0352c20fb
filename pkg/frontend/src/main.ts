// DOM wiring for the typing demo: a textarea, a suggestion row, an
// error banner, and a status line describing the loaded model.

import { fetchModelInfo, resolveBaseUrl } from "./api.js";
import { SuggestionStore, UiState } from "./store.js";

const baseUrl = resolveBaseUrl(window.location.search);

const draft = document.getElementById("draft") as HTMLTextAreaElement;
const suggestionRow = document.getElementById("suggestions") as HTMLDivElement;
const banner = document.getElementById("banner") as HTMLDivElement;
const status = document.getElementById("status") as HTMLDivElement;

function render(state: UiState): void {
  banner.textContent = state.errorBanner ?? "";
  banner.style.display = state.errorBanner ? "block" : "none";

  suggestionRow.replaceChildren();
  if (state.pendingRequest) {
    const waiting = document.createElement("span");
    waiting.className = "waiting";
    waiting.textContent = "…";
    suggestionRow.append(waiting);
    return;
  }
  state.suggestions.forEach((suggestion, index) => {
    const button = document.createElement("button");
    button.type = "button";
    button.className = "suggestion";
    const pct = (suggestion.probability * 100).toFixed(1);
    button.innerHTML = "";
    const word = document.createElement("span");
    word.textContent = suggestion.token;
    const badge = document.createElement("span");
    badge.className = "badge";
    badge.textContent = `${pct}%`;
    button.append(word, badge);
    button.addEventListener("click", () => {
      store.acceptSuggestion(index);
      draft.value = store.getState().draftText;
      draft.focus();
    });
    suggestionRow.append(button);
  });
}

const store = new SuggestionStore({ baseUrl, k: 5, onChange: render });

draft.addEventListener("input", () => store.onInput(draft.value));

fetchModelInfo(baseUrl, fetch)
  .then((info) => {
    status.textContent =
      `model: ${info.embedding_source} embeddings, n=${info.n}, ` +
      `corpus ${info.corpus_digest.slice(0, 15)}...`;
  })
  .catch(() => {
    status.textContent = `service unreachable at ${baseUrl}; start it with "gramweave serve"`;
  });
