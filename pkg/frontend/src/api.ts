/** Typed client for the studio service. Errors surface the server's
 * structured {code, message, details} body verbatim. */

import type { CatalogDoc, StoryboardPage, StyleDocument, StyleInfo } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details: string[] = [],
  ) {
    super(message);
  }
}

async function raiseFor(response: Response): Promise<never> {
  let code = "http_error";
  let message = `${response.status}`;
  let details: string[] = [];
  try {
    const body = await response.json();
    code = body.code ?? code;
    message = body.message ?? message;
    details = body.details ?? [];
  } catch {
    /* non-JSON error body */
  }
  throw new ApiError(response.status, code, message, details);
}

export class StudioApi {
  constructor(
    readonly base: string,
    readonly session = "default",
    private fetchFn: typeof fetch = fetch.bind(globalThis),
  ) {}

  private url(path: string): string {
    const sep = path.includes("?") ? "&" : "?";
    return `${this.base}${path}${sep}session=${encodeURIComponent(this.session)}`;
  }

  async getCatalog(): Promise<CatalogDoc> {
    const r = await this.fetchFn(this.url("/api/filters"));
    if (!r.ok) await raiseFor(r);
    return r.json();
  }

  async uploadImage(file: File | Blob, name = "upload.png"): Promise<string> {
    const form = new FormData();
    form.append("file", file, name);
    const r = await this.fetchFn(this.url("/api/images"), { method: "POST", body: form });
    if (!r.ok) await raiseFor(r);
    return (await r.json()).image_id;
  }

  async preview(imageId: string, style: StyleDocument, maxDim = 720): Promise<Blob> {
    const r = await this.fetchFn(this.url("/api/preview"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ image_id: imageId, style, max_dim: maxDim }),
    });
    if (!r.ok) await raiseFor(r);
    return r.blob();
  }

  async saveStyle(name: string, style: StyleDocument): Promise<{ name: string; version: number }> {
    const r = await this.fetchFn(this.url("/api/styles"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ name, style }),
    });
    if (!r.ok) await raiseFor(r);
    return r.json();
  }

  async listStyles(): Promise<StyleInfo[]> {
    const r = await this.fetchFn(this.url("/api/styles"));
    if (!r.ok) await raiseFor(r);
    return (await r.json()).styles;
  }

  async getStyle(name: string): Promise<StyleDocument> {
    const r = await this.fetchFn(this.url(`/api/styles/${encodeURIComponent(name)}`));
    if (!r.ok) await raiseFor(r);
    return r.json();
  }

  async randomize(seed: number, count = 1): Promise<StyleDocument[]> {
    const r = await this.fetchFn(this.url("/api/styles/randomize"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ seed, count }),
    });
    if (!r.ok) await raiseFor(r);
    return (await r.json()).styles;
  }

  async makeStoryboards(
    imageIds: string[],
    count: number,
    seed: number,
  ): Promise<StoryboardPage[]> {
    const r = await this.fetchFn(this.url("/api/storyboards"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ image_ids: imageIds, count, seed }),
    });
    if (!r.ok) await raiseFor(r);
    return (await r.json()).pages;
  }

  pageUrl(ref: string): string {
    return this.url(`/api/storyboards/pages/${encodeURIComponent(ref)}`);
  }
}
