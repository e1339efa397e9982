/** A done job in the exact JSON shape the service returns. */

import type {
  EvidenceItem,
  JobSnapshot,
  OverrideResponse,
  VerificationReport,
} from '../src/types';

function evidence(
  claimId: string,
  resultId: string,
  domain: string,
  label: EvidenceItem['label'],
  tier: number,
  rationale: string,
): EvidenceItem {
  return {
    claim_id: claimId,
    result: {
      id: resultId,
      query_rank: 0,
      url: `https://${domain}/story/${resultId}`,
      domain,
      title: `Coverage from ${domain}`,
      snippet_or_body: 'Body text.',
      retrieved_at: '2000-01-01T00:00:00Z',
    },
    label,
    confidence: label === 'baseless' ? 'medium' : 'high',
    rationale,
    source_tier: tier,
  };
}

export function doneReport(): VerificationReport {
  const claimId = 'a1:main:0';
  return {
    article: { id: 'a1', title: 'Bridge closure', body: 'The bridge closed on Monday.' },
    claims: [
      { id: claimId, article_id: 'a1', text: 'The bridge closed on Monday.', granularity: 'main', ordinal: 0 },
    ],
    queries: [{ claim_id: claimId, text: 'bridge closed monday', rank: 0 }],
    evidence: [
      evidence(claimId, 'r1', 'apnews.com', 'support', 5, 'Reports the same closure.'),
      evidence(claimId, 'r2', 'blogspot.com', 'negate', 1, 'Claims the bridge stayed open.'),
      evidence(claimId, 'r3', 'webmd.com', 'baseless', 3, ''),
      evidence(claimId, 'r4', 'citynews.com', 'baseless', 4, ''),
    ],
    claim_verdicts: [
      {
        claim_id: claimId,
        truth_probability: 0.712345678901,
        decision: 'supported',
        evidence_counts: { '5:support': 1, '1:negate': 1, '3:baseless': 1, '4:baseless': 1 },
      },
    ],
    article_verdict: 'real',
    article_probability: 0.712345678901,
    pipeline_version: 'claimcheck/0.1.0',
    content_hash: 'abc123',
  };
}

export function doneJob(): JobSnapshot {
  return {
    job_id: 'JOB0000000000000000000000',
    state: 'done',
    submitted_at: '2024-05-02T12:00:00Z',
    updated_at: '2024-05-02T12:00:05Z',
    report: doneReport(),
    error: null,
  };
}

/** The server's recomputation after flipping the sole support to negate. */
export function flippedOverrideResponse(): OverrideResponse {
  const report = doneReport();
  const verdict = {
    ...report.claim_verdicts[0],
    truth_probability: 0.23456789012,
    decision: 'refuted' as const,
  };
  const flipped: VerificationReport = {
    ...report,
    claim_verdicts: [verdict],
    article_verdict: 'fake',
    article_probability: 0.23456789012,
    content_hash: 'def456',
  };
  return {
    claim_verdict: verdict,
    article_verdict: 'fake',
    article_probability: 0.23456789012,
    report: flipped,
  };
}

export interface FetchLogEntry {
  method: string;
  path: string;
  body?: unknown;
}

/** Install a fetch mock with route handlers; returns the call log. */
export function mockFetch(
  routes: Record<string, (entry: FetchLogEntry) => { status?: number; body: unknown }>,
): FetchLogEntry[] {
  const log: FetchLogEntry[] = [];
  globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const path = String(input);
    const method = init?.method ?? 'GET';
    const entry: FetchLogEntry = { method, path };
    if (init?.body) entry.body = JSON.parse(String(init.body));
    log.push(entry);
    const key = `${method} ${path}`;
    const handler = routes[key];
    if (!handler) {
      return new Response(JSON.stringify({ detail: 'not found' }), { status: 404 });
    }
    const out = handler(entry);
    return new Response(JSON.stringify(out.body), { status: out.status ?? 200 });
  }) as typeof fetch;
  return log;
}
