/** Star widgets: read-only quality display and 1-5 rating input. */

export function nearestHalf(value: number): number {
  return Math.round(value * 2) / 2;
}

/**
 * Five-star display of a raw 0-5 estimate, rounded to the nearest half
 * star. The exact value stays available on hover via the title.
 */
export function renderStars(raw: number): HTMLElement {
  const el = document.createElement("span");
  el.className = "stars";
  el.title = raw.toFixed(2);
  const half = nearestHalf(raw);
  el.dataset.value = String(half);
  for (let i = 1; i <= 5; i++) {
    const star = document.createElement("span");
    if (half >= i) {
      star.className = "star full";
      star.textContent = "★";
    } else if (half >= i - 0.5) {
      star.className = "star half";
      star.textContent = "⯪";
    } else {
      star.className = "star empty";
      star.textContent = "☆";
    }
    el.appendChild(star);
  }
  return el;
}

export interface RatingInput {
  el: HTMLElement;
  value(): number | null;
}

/** Clickable 1-5 rating row; starts unset. */
export function ratingInput(label: string): RatingInput {
  const wrapper = document.createElement("div");
  wrapper.className = "rating-input";
  const caption = document.createElement("span");
  caption.textContent = label;
  wrapper.appendChild(caption);

  let selected: number | null = null;
  const stars: HTMLButtonElement[] = [];
  const paint = () => {
    stars.forEach((btn, idx) => {
      btn.textContent = selected !== null && idx < selected ? "★" : "☆";
    });
  };
  for (let i = 1; i <= 5; i++) {
    const btn = document.createElement("button");
    btn.type = "button";
    btn.className = "rating-star";
    btn.dataset.rating = String(i);
    btn.addEventListener("click", () => {
      selected = i;
      wrapper.dataset.value = String(i);
      paint();
    });
    stars.push(btn);
    wrapper.appendChild(btn);
  }
  paint();
  return { el: wrapper, value: () => selected };
}
