/** Browser-session state: role, terms acceptance, expert credentials. */

export type Role = "common" | "expert";

export interface UiSession {
  role: Role;
  acceptedTerms: boolean;
  expertToken?: string;
}

export function newSession(): UiSession {
  return { role: "common", acceptedTerms: false };
}

/** Feedback may be submitted only after the terms are accepted, and the
 * expert role additionally needs a token on file. */
export function canSubmitFeedback(session: UiSession): boolean {
  if (!session.acceptedTerms) return false;
  if (session.role === "expert") return Boolean(session.expertToken);
  return true;
}
