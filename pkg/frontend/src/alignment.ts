/** Word-alignment views: link lines for hard alignments, a heatmap grid
 * for soft attention. Cell opacity is proportional to the attention
 * weight; rows are target tokens, columns source tokens. */

import type { Alignment } from "./api.js";

function diagnostic(message: string): HTMLElement {
  const el = document.createElement("div");
  el.className = "alignment-error";
  el.textContent = message;
  return el;
}

function renderHard(
  links: [number, number][],
  srcTokens: string[],
  tgtTokens: string[],
): HTMLElement {
  const el = document.createElement("div");
  el.className = "alignment hard-alignment";

  const width = 80 * Math.max(srcTokens.length, tgtTokens.length);
  const svgNS = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(svgNS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} 120`);
  svg.setAttribute("class", "hard-links");

  const xFor = (idx: number, count: number) => ((idx + 0.5) * width) / count;
  srcTokens.forEach((token, i) => {
    const text = document.createElementNS(svgNS, "text");
    text.setAttribute("x", String(xFor(i, srcTokens.length)));
    text.setAttribute("y", "20");
    text.setAttribute("text-anchor", "middle");
    text.setAttribute("class", "src-token");
    text.textContent = token;
    svg.appendChild(text);
  });
  tgtTokens.forEach((token, j) => {
    const text = document.createElementNS(svgNS, "text");
    text.setAttribute("x", String(xFor(j, tgtTokens.length)));
    text.setAttribute("y", "110");
    text.setAttribute("text-anchor", "middle");
    text.setAttribute("class", "tgt-token");
    text.textContent = token;
    svg.appendChild(text);
  });
  for (const [i, j] of links) {
    const line = document.createElementNS(svgNS, "line");
    line.setAttribute("x1", String(xFor(i, srcTokens.length)));
    line.setAttribute("y1", "28");
    line.setAttribute("x2", String(xFor(j, tgtTokens.length)));
    line.setAttribute("y2", "96");
    line.setAttribute("class", "link-line");
    svg.appendChild(line);
  }
  el.appendChild(svg);
  return el;
}

function renderSoft(
  matrix: number[][],
  srcTokens: string[],
  tgtTokens: string[],
): HTMLElement {
  const el = document.createElement("div");
  el.className = "alignment soft-alignment";
  const grid = document.createElement("div");
  grid.className = "heatmap";
  grid.style.gridTemplateColumns = `auto repeat(${srcTokens.length}, 1fr)`;

  const corner = document.createElement("span");
  corner.className = "heatmap-corner";
  grid.appendChild(corner);
  for (const token of srcTokens) {
    const label = document.createElement("span");
    label.className = "heatmap-col-label";
    label.textContent = token;
    grid.appendChild(label);
  }
  matrix.forEach((row, i) => {
    const label = document.createElement("span");
    label.className = "heatmap-row-label";
    label.textContent = tgtTokens[i];
    grid.appendChild(label);
    row.forEach((alpha, j) => {
      const cell = document.createElement("span");
      cell.className = "heatmap-cell";
      cell.style.opacity = String(alpha);
      cell.dataset.alpha = alpha.toFixed(4);
      cell.title = `${tgtTokens[i]} ← ${srcTokens[j]}: ${alpha.toFixed(3)}`;
      grid.appendChild(cell);
    });
  });
  el.appendChild(grid);
  return el;
}

export function renderAlignment(
  alignment: Alignment,
  srcTokens: string[],
  tgtTokens: string[],
): HTMLElement {
  if (alignment.kind === "soft") {
    const ok =
      alignment.matrix.length === tgtTokens.length &&
      alignment.matrix.every((row) => row.length === srcTokens.length);
    if (!ok) {
      return diagnostic("alignment dimensions do not match the token lists");
    }
    return renderSoft(alignment.matrix, srcTokens, tgtTokens);
  }
  const inBounds = alignment.links.every(
    ([i, j]) => i >= 0 && i < srcTokens.length && j >= 0 && j < tgtTokens.length,
  );
  if (!inBounds) {
    return diagnostic("alignment links point outside the token lists");
  }
  return renderHard(alignment.links, srcTokens, tgtTokens);
}
