/** Thin fetch client for the shift service. */

import type { CategoriesReply, ErrorBody, ShiftReply, ShiftRequest } from "./wire.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    detail?: string,
  ) {
    super(detail ?? code);
  }
}

export class ShiftClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  async shift(request: ShiftRequest): Promise<ShiftReply> {
    const res = await this.fetchFn(`${this.baseUrl}/v1/shift`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!res.ok) {
      const body = (await res.json().catch(() => ({}))) as Partial<ErrorBody>;
      throw new ApiError(res.status, body.error_code ?? `http_${res.status}`, body.detail);
    }
    return (await res.json()) as ShiftReply;
  }

  async categories(): Promise<CategoriesReply> {
    const res = await this.fetchFn(`${this.baseUrl}/v1/categories`);
    if (!res.ok) {
      const body = (await res.json().catch(() => ({}))) as Partial<ErrorBody>;
      throw new ApiError(res.status, body.error_code ?? `http_${res.status}`, body.detail);
    }
    return (await res.json()) as CategoriesReply;
  }
}
