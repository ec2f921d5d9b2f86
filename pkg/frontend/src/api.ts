/** Typed client for the translation service JSON API. */

export interface DictEntry {
  headword: string;
  language: string;
  gloss: string;
  notes?: string;
}

export interface HardAlignment {
  kind: "hard";
  links: [number, number][];
}

export interface SoftAlignment {
  kind: "soft";
  matrix: number[][];
}

export type Alignment = HardAlignment | SoftAlignment;

export interface TranslateResponse {
  v: number;
  translation_id: string;
  output_text: string;
  stars: number;
  stars_raw: number;
  src_tokens: string[];
  tgt_tokens: string[];
  alignment: Alignment;
  dict_src: DictEntry[][];
  dict_tgt: DictEntry[][];
}

export interface ExampleItem {
  id: string;
  language: "chr" | "en";
  text: string;
  status: "unlabeled" | "labeled";
}

export interface TranslateRequest {
  text: string;
  direction: "chr-en" | "en-chr";
  model: "smt" | "nmt";
  example_id?: string;
}

export interface CommonFeedbackRequest {
  translation_id: string;
  helpfulness: number;
  comment?: string;
  accepted_terms: boolean;
}

export interface ExpertFeedbackRequest {
  translation_id: string;
  quality: number;
  correction: string;
  comment?: string;
  author?: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`API error ${status}: ${detail}`);
  }
}

async function parseDetail(resp: Response): Promise<string> {
  try {
    const body = await resp.json();
    return typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
  } catch {
    return resp.statusText;
  }
}

export class ApiClient {
  constructor(private baseUrl = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.baseUrl + path, init);
    if (!resp.ok) {
      throw new ApiError(resp.status, await parseDetail(resp));
    }
    return (await resp.json()) as T;
  }

  translate(req: TranslateRequest): Promise<TranslateResponse> {
    return this.request("/api/translate", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  async examples(lang?: string, status?: string): Promise<ExampleItem[]> {
    const params = new URLSearchParams();
    if (lang) params.set("lang", lang);
    if (status) params.set("status", status);
    const query = params.toString();
    const data = await this.request<{ items: ExampleItem[] }>(
      `/api/examples${query ? "?" + query : ""}`,
    );
    return data.items;
  }

  submitCommon(req: CommonFeedbackRequest): Promise<{ id: string }> {
    return this.request("/api/feedback/common", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  submitExpert(req: ExpertFeedbackRequest, token: string): Promise<{ id: string }> {
    return this.request("/api/feedback/expert", {
      method: "POST",
      headers: {
        "Content-Type": "application/json",
        Authorization: `Bearer ${token}`,
      },
      body: JSON.stringify(req),
    });
  }

  health(): Promise<{ status: string }> {
    return this.request("/api/health");
  }
}
