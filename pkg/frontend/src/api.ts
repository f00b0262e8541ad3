// Typed client for the advisory HTTP API (all endpoints under /api/v1).

export interface BoxDto {
  cx: number;
  cy: number;
  w: number;
  h: number;
}

export interface DetectionDto {
  slug: string;
  name_ne: string;
  name_en: string;
  score: number;
  box: BoxDto;
}

export interface RemedyDto {
  slug: string;
  lang?: string;
  name?: string;
  name_ne?: string;
  name_en?: string | null;
  symptoms?: string[];
  prevention?: string[];
  remedy?: string[];
  draft?: boolean;
  fallback?: boolean;
  no_remedy_defined?: boolean;
  kb_version?: number;
}

export interface AdvisoryResponse {
  request_id: string;
  model_version: string;
  kb_version: number;
  detections: DetectionDto[];
  remedies: RemedyDto[];
}

export interface KbEntryDoc {
  name_ne: string;
  name_en: string | null;
  symptoms: string[];
  prevention: string[];
  remedy: string[];
  last_modified_version: number;
  draft?: boolean;
}

export interface KbDelta {
  since: number;
  to: number;
  entries: Record<string, KbEntryDoc>;
}

export interface CorrectionDto {
  slug: string;
  box?: BoxDto;
}

export interface FeedbackPayload {
  request_id?: string;
  image_hash?: string;
  original_detections?: DetectionDto[];
  corrected_labels?: CorrectionDto[] | "no disease" | null;
  comment?: string;
  locale?: string;
}

/** Server-reported failure, carrying the envelope's machine-readable code. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseJsonOrThrow<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = "http-error";
  let message = `request failed with status ${response.status}`;
  try {
    const body = (await response.json()) as { error?: { code?: string; message?: string } };
    if (body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body: keep the generic code/message
  }
  throw new ApiError(response.status, code, message);
}

export class AdvisoryApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string, params?: Record<string, string>): string {
    const query = params ? "?" + new URLSearchParams(params).toString() : "";
    return `${this.baseUrl}/api/v1${path}${query}`;
  }

  async detect(image: Blob, options?: { lang?: string; confThreshold?: number }): Promise<AdvisoryResponse> {
    const params: Record<string, string> = {};
    if (options?.lang) params["lang"] = options.lang;
    if (options?.confThreshold !== undefined) params["conf_threshold"] = String(options.confThreshold);
    const form = new FormData();
    form.append("image", image, "upload.png");
    const response = await this.fetchFn(this.url("/detect", params), {
      method: "POST",
      body: form,
    });
    return parseJsonOrThrow<AdvisoryResponse>(response);
  }

  async remedy(slug: string, lang?: string): Promise<RemedyDto> {
    const params = lang ? { lang } : undefined;
    const response = await this.fetchFn(this.url(`/remedies/${encodeURIComponent(slug)}`, params));
    return parseJsonOrThrow<RemedyDto>(response);
  }

  async kbVersion(): Promise<number> {
    const response = await this.fetchFn(this.url("/kb/version"));
    const body = await parseJsonOrThrow<{ version: number }>(response);
    return body.version;
  }

  async kbDelta(since: number): Promise<KbDelta> {
    const response = await this.fetchFn(this.url("/kb/delta", { since: String(since) }));
    return parseJsonOrThrow<KbDelta>(response);
  }

  async submitFeedback(payload: FeedbackPayload): Promise<string> {
    const response = await this.fetchFn(this.url("/feedback"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    const body = await parseJsonOrThrow<{ id: string }>(response);
    return body.id;
  }
}
