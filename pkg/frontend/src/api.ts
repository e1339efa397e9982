/**
 * Thin client over the verification service HTTP API.
 * The console's only writes are the override and rerun endpoints.
 */

import type { JobSnapshot, OverrideResponse, VerdictLabel, VerificationReport } from './types';

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(path, init);
  } catch (err) {
    throw new ApiError(0, `service unreachable: ${String(err)}`);
  }
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === 'string') detail = body.detail;
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export const api = {
  async submit(article: { body: string; title?: string; id?: string }): Promise<string> {
    const out = await request<{ job_id: string }>('/v1/verify', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(article),
    });
    return out.job_id;
  },

  getJob(jobId: string): Promise<JobSnapshot> {
    return request<JobSnapshot>(`/v1/jobs/${jobId}`);
  },

  getReport(jobId: string): Promise<VerificationReport> {
    return request<VerificationReport>(`/v1/reports/${jobId}`);
  },

  override(
    jobId: string,
    claimId: string,
    resultId: string,
    newLabel: VerdictLabel,
    author = 'console',
  ): Promise<OverrideResponse> {
    return request<OverrideResponse>(`/v1/jobs/${jobId}/overrides`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({
        claim_id: claimId,
        result_id: resultId,
        new_label: newLabel,
        author,
      }),
    });
  },

  rerunClaim(jobId: string, claimId: string): Promise<{ report: VerificationReport }> {
    return request<{ report: VerificationReport }>(
      `/v1/jobs/${jobId}/claims/${encodeURIComponent(claimId)}/rerun`,
      { method: 'POST' },
    );
  },

  getRegistry(): Promise<{ entries: Record<string, number>; default_tier: number }> {
    return request('/v1/registry');
  },
};
