import { ApiClient } from "./api.js";
import { createApp } from "./app.js";
import { newSession } from "./session.js";

const api = new ApiClient();
const session = newSession();
const app = createApp(api, session);

const root = document.getElementById("root");
if (!root) {
  throw new Error("missing #root element");
}

// session controls: role, terms, expert token
const bar = document.createElement("div");
bar.className = "session-bar";

const terms = document.createElement("label");
const termsBox = document.createElement("input");
termsBox.type = "checkbox";
termsBox.addEventListener("change", () => {
  session.acceptedTerms = termsBox.checked;
});
terms.append(termsBox, " I accept the terms of use");
bar.appendChild(terms);

const roleLabel = document.createElement("label");
const role = document.createElement("select");
for (const value of ["common", "expert"]) {
  const opt = document.createElement("option");
  opt.value = value;
  opt.textContent = value;
  role.appendChild(opt);
}
roleLabel.append(" Role: ", role);
bar.appendChild(roleLabel);

const tokenLabel = document.createElement("label");
const token = document.createElement("input");
token.type = "password";
token.placeholder = "expert token";
token.hidden = true;
tokenLabel.append(token);
bar.appendChild(tokenLabel);

role.addEventListener("change", () => {
  session.role = role.value as "common" | "expert";
  token.hidden = session.role !== "expert";
});
token.addEventListener("change", () => {
  session.expertToken = token.value || undefined;
});

root.append(bar, app.el);
void app.refreshExamples();
