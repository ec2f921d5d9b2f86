/** Feedback forms. Client-side validation is a strict subset of what
 * the server enforces: a rating is always required, expert corrections
 * must be non-empty, and nothing is sent until terms are accepted. */

import { ApiClient, ApiError, TranslateResponse } from "./api.js";
import { UiSession } from "./session.js";
import { ratingInput } from "./stars.js";

export interface FeedbackPanelOptions {
  api: ApiClient;
  session: UiSession;
  translation: TranslateResponse;
  onSubmitted?: (id: string) => void;
  onAuthError?: () => void;
}

export interface FeedbackPanel {
  el: HTMLElement;
  /** Runs validation; resolves to the new record id or null if blocked. */
  submit(): Promise<string | null>;
}

function fieldError(el: HTMLElement, message: string | null): void {
  let err = el.querySelector<HTMLElement>(".field-error");
  if (!err) {
    err = document.createElement("div");
    err.className = "field-error";
    el.appendChild(err);
  }
  err.textContent = message ?? "";
  err.hidden = message === null;
}

export function buildFeedbackPanel(opts: FeedbackPanelOptions): FeedbackPanel {
  const { api, session, translation } = opts;
  const el = document.createElement("section");
  el.className = "feedback-panel";

  const heading = document.createElement("h3");
  heading.textContent = session.role === "expert" ? "Expert feedback" : "User feedback";
  el.appendChild(heading);

  const rating = ratingInput(
    session.role === "expert"
      ? "How good do you think the translation is? (1-5)"
      : "How helpful do you think the translation is? (1-5)",
  );
  el.appendChild(rating.el);

  let correction: HTMLTextAreaElement | null = null;
  if (session.role === "expert") {
    const label = document.createElement("label");
    label.textContent = "Please correct the translation:";
    correction = document.createElement("textarea");
    correction.className = "correction-input";
    correction.value = translation.output_text;
    label.appendChild(correction);
    el.appendChild(label);
  }

  const commentLabel = document.createElement("label");
  commentLabel.textContent = "Open-ended comments (optional):";
  const comment = document.createElement("textarea");
  comment.className = "comment-input";
  commentLabel.appendChild(comment);
  el.appendChild(commentLabel);

  const termsNotice = document.createElement("div");
  termsNotice.className = "terms-notice";
  termsNotice.textContent = "Accept the terms of use before submitting feedback.";
  termsNotice.hidden = session.acceptedTerms;
  el.appendChild(termsNotice);

  const button = document.createElement("button");
  button.type = "button";
  button.className = "submit-feedback";
  button.textContent = "Submit";
  el.appendChild(button);

  const status = document.createElement("div");
  status.className = "feedback-status";
  el.appendChild(status);

  async function submit(): Promise<string | null> {
    termsNotice.hidden = session.acceptedTerms;
    if (!session.acceptedTerms) {
      return null;
    }
    const score = rating.value();
    if (score === null) {
      fieldError(rating.el, "a rating is required");
      return null;
    }
    fieldError(rating.el, null);
    if (session.role === "expert") {
      const text = correction!.value.trim();
      if (!text) {
        fieldError(correction!.parentElement as HTMLElement, "the correction must not be empty");
        return null;
      }
      fieldError(correction!.parentElement as HTMLElement, null);
      if (!session.expertToken) {
        opts.onAuthError?.();
        return null;
      }
      try {
        const result = await api.submitExpert(
          {
            translation_id: translation.translation_id,
            quality: score,
            correction: text,
            comment: comment.value || undefined,
          },
          session.expertToken,
        );
        status.textContent = "correction saved";
        opts.onSubmitted?.(result.id);
        return result.id;
      } catch (err) {
        if (err instanceof ApiError && err.status === 401) {
          opts.onAuthError?.();
          return null;
        }
        throw err;
      }
    }
    const result = await api.submitCommon({
      translation_id: translation.translation_id,
      helpfulness: score,
      comment: comment.value || undefined,
      accepted_terms: session.acceptedTerms,
    });
    status.textContent = "feedback saved";
    opts.onSubmitted?.(result.id);
    return result.id;
  }

  button.addEventListener("click", () => {
    void submit().catch((err) => {
      status.textContent = String(err);
    });
  });

  return { el, submit };
}
