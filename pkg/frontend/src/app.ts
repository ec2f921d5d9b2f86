/** Translation page: model and direction selectors, free text or an
 * example input, and (after a translation) the star estimate, the
 * alignment view, dictionary panels, and the feedback form. */

import { ApiClient, DictEntry, ExampleItem, TranslateResponse } from "./api.js";
import { renderAlignment } from "./alignment.js";
import { buildFeedbackPanel } from "./feedback.js";
import { UiSession, newSession } from "./session.js";
import { renderStars } from "./stars.js";

function option(value: string, label: string): HTMLOptionElement {
  const el = document.createElement("option");
  el.value = value;
  el.textContent = label;
  return el;
}

function dictPanel(title: string, tokens: string[], panels: DictEntry[][]): HTMLElement {
  const el = document.createElement("div");
  el.className = "dict-panel";
  const heading = document.createElement("h4");
  heading.textContent = title;
  el.appendChild(heading);
  tokens.forEach((token, idx) => {
    const block = document.createElement("details");
    block.className = "dict-token";
    const summary = document.createElement("summary");
    summary.textContent = token;
    block.appendChild(summary);
    const list = document.createElement("ul");
    for (const entry of panels[idx] ?? []) {
      const item = document.createElement("li");
      item.textContent = `${entry.headword} (${entry.language}): ${entry.gloss}`;
      list.appendChild(item);
    }
    if (!list.children.length) {
      const item = document.createElement("li");
      item.className = "dict-empty";
      item.textContent = "no entries";
      list.appendChild(item);
    }
    block.appendChild(list);
    el.appendChild(block);
  });
  return el;
}

export interface App {
  el: HTMLElement;
  session: UiSession;
  refreshExamples(): Promise<void>;
  chooseExample(id: string): void;
  translate(): Promise<TranslateResponse | null>;
  submitFeedback(): Promise<string | null>;
  lastTranslation(): TranslateResponse | null;
}

export function createApp(api: ApiClient, session: UiSession = newSession()): App {
  const el = document.createElement("div");
  el.className = "app";

  const banner = document.createElement("div");
  banner.className = "banner";
  banner.hidden = true;
  el.appendChild(banner);

  const controls = document.createElement("div");
  controls.className = "controls";
  el.appendChild(controls);

  const direction = document.createElement("select");
  direction.className = "direction-select";
  direction.append(option("chr-en", "Cherokee → English"), option("en-chr", "English → Cherokee"));
  controls.appendChild(direction);

  const model = document.createElement("select");
  model.className = "model-select";
  model.append(option("smt", "Statistical"), option("nmt", "Neural"));
  controls.appendChild(model);

  const examples = document.createElement("select");
  examples.className = "example-select";
  controls.appendChild(examples);

  const input = document.createElement("textarea");
  input.className = "source-input";
  el.appendChild(input);

  const translateBtn = document.createElement("button");
  translateBtn.type = "button";
  translateBtn.className = "translate-btn";
  translateBtn.textContent = "Translate";
  el.appendChild(translateBtn);

  const result = document.createElement("div");
  result.className = "result";
  el.appendChild(result);

  let exampleItems: ExampleItem[] = [];
  let chosenExample: string | undefined;
  let last: TranslateResponse | null = null;
  let feedbackSubmit: (() => Promise<string | null>) | null = null;

  function showBanner(message: string | null): void {
    banner.hidden = message === null;
    banner.textContent = message ?? "";
  }

  function sourceLanguage(): "chr" | "en" {
    return direction.value === "chr-en" ? "chr" : "en";
  }

  async function refreshExamples(): Promise<void> {
    try {
      exampleItems = await api.examples(sourceLanguage());
    } catch (err) {
      showBanner(`could not load examples: ${err}`);
      exampleItems = [];
    }
    examples.textContent = "";
    examples.appendChild(option("", "Choose an example"));
    for (const item of exampleItems) {
      const suffix = item.status === "labeled" ? " [labeled]" : "";
      examples.appendChild(option(item.id, item.text + suffix));
    }
    examples.value = chosenExample ?? "";
  }

  function chooseExample(id: string): void {
    const item = exampleItems.find((x) => x.id === id);
    chosenExample = item?.id;
    examples.value = item?.id ?? "";
    if (item) {
      input.value = item.text;
    }
  }

  async function translate(): Promise<TranslateResponse | null> {
    if (translateBtn.disabled) return null; // one in-flight request at most
    showBanner(null);
    translateBtn.disabled = true;
    try {
      const response = await api.translate({
        text: input.value,
        direction: direction.value as "chr-en" | "en-chr",
        model: model.value as "smt" | "nmt",
        example_id: chosenExample,
      });
      last = response;
      renderResult(response);
      return response;
    } catch (err) {
      showBanner(`translation failed: ${err}`);
      return null;
    } finally {
      translateBtn.disabled = false;
    }
  }

  function renderResult(response: TranslateResponse): void {
    result.textContent = "";

    const output = document.createElement("p");
    output.className = "output-text";
    output.textContent = response.output_text;
    result.appendChild(output);

    const quality = document.createElement("div");
    quality.className = "quality";
    quality.append("Translation Quality Estimation: ", renderStars(response.stars_raw));
    result.appendChild(quality);

    result.appendChild(
      renderAlignment(response.alignment, response.src_tokens, response.tgt_tokens),
    );
    result.appendChild(dictPanel("Source terms", response.src_tokens, response.dict_src));
    result.appendChild(dictPanel("Translation terms", response.tgt_tokens, response.dict_tgt));

    const panel = buildFeedbackPanel({
      api,
      session,
      translation: response,
      onSubmitted: () => {
        void refreshExamples();
      },
      onAuthError: () => {
        showBanner("expert authorization required: set your access token");
      },
    });
    feedbackSubmit = panel.submit;
    result.appendChild(panel.el);
  }

  direction.addEventListener("change", () => {
    chosenExample = undefined;
    void refreshExamples();
  });
  examples.addEventListener("change", () => chooseExample(examples.value));
  translateBtn.addEventListener("click", () => void translate());

  return {
    el,
    session,
    refreshExamples,
    chooseExample,
    translate,
    submitFeedback: () => (feedbackSubmit ? feedbackSubmit() : Promise.resolve(null)),
    lastTranslation: () => last,
  };
}
