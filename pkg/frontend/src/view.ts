/**
 * DOM rendering for the review console.
 *
 * Every probability and verdict shown here is copied verbatim from the
 * latest server response; the console does no verdict math of its own.
 * Evidence is grouped by label with the (usually dominant) baseless group
 * collapsed by default so support and negate stay in the foreground.
 */

import type {
  Claim,
  ClaimVerdict,
  EvidenceItem,
  JobState,
  ReportView,
  VerdictLabel,
  VerificationReport,
} from './types';
import { STAGE_ORDER, overrideKey } from './types';

export interface ViewHandlers {
  onOverride: (item: EvidenceItem, newLabel: VerdictLabel) => void;
  onRerun: (claimId: string) => void;
}

const LABELS: VerdictLabel[] = ['support', 'negate', 'baseless'];

export function createReportView(report: VerificationReport): ReportView {
  return {
    report,
    expandedClaims: new Set(report.claims.map((c) => c.id)),
    showBaseless: new Set(),
    pendingOverrides: new Map(),
  };
}

export function renderStageTracker(container: HTMLElement, state: JobState): void {
  container.innerHTML = '';
  container.id ||= 'stage-tracker';
  const reached = state === 'failed' ? -1 : STAGE_ORDER.indexOf(state);
  for (const [index, stage] of STAGE_ORDER.entries()) {
    const el = document.createElement('span');
    el.className = 'stage';
    el.dataset.stage = stage;
    el.textContent = stage;
    if (state === 'failed') {
      el.classList.add('stalled');
    } else if (index < reached) {
      el.classList.add('done');
    } else if (index === reached) {
      el.classList.add('current');
    }
    container.appendChild(el);
  }
}

export function showError(container: HTMLElement, message: string): void {
  let banner = container.querySelector<HTMLElement>('#error-banner');
  if (!banner) {
    banner = document.createElement('div');
    banner.id = 'error-banner';
    container.prepend(banner);
  }
  banner.textContent = message;
  banner.hidden = false;
}

export function clearError(container: HTMLElement): void {
  const banner = container.querySelector<HTMLElement>('#error-banner');
  if (banner) banner.hidden = true;
}

export function renderEvidenceCard(item: EvidenceItem, handlers: ViewHandlers): HTMLElement {
  const card = document.createElement('article');
  card.className = 'evidence-card';
  card.dataset.resultId = item.result.id;
  card.dataset.claimId = item.claim_id;

  const badge = document.createElement('span');
  badge.className = `badge badge-${item.label}`;
  badge.textContent = item.label;
  card.appendChild(badge);

  const confidence = document.createElement('span');
  confidence.className = 'confidence';
  confidence.textContent = item.confidence;
  card.appendChild(confidence);

  const source = document.createElement('span');
  source.className = 'source';
  source.innerHTML = '';
  const link = document.createElement('a');
  link.href = item.result.url;
  link.textContent = item.result.domain;
  source.appendChild(link);
  const tier = document.createElement('span');
  tier.className = 'tier';
  tier.textContent = `tier ${item.source_tier}`;
  source.appendChild(tier);
  card.appendChild(source);

  const title = document.createElement('div');
  title.className = 'result-title';
  title.textContent = item.result.title;
  card.appendChild(title);

  const rationale = document.createElement('p');
  rationale.className = 'rationale';
  rationale.textContent = item.rationale;
  card.appendChild(rationale);

  const select = document.createElement('select');
  select.className = 'override-select';
  for (const label of LABELS) {
    const option = document.createElement('option');
    option.value = label;
    option.textContent = label;
    option.selected = label === item.label;
    select.appendChild(option);
  }
  card.appendChild(select);

  const apply = document.createElement('button');
  apply.className = 'override-apply';
  apply.textContent = 'override';
  apply.addEventListener('click', () => {
    handlers.onOverride(item, select.value as VerdictLabel);
  });
  card.appendChild(apply);

  return card;
}

function renderClaim(
  claim: Claim,
  verdict: ClaimVerdict | undefined,
  evidence: EvidenceItem[],
  view: ReportView,
  handlers: ViewHandlers,
): HTMLElement {
  const section = document.createElement('section');
  section.className = 'claim';
  section.dataset.claimId = claim.id;

  const header = document.createElement('header');
  const text = document.createElement('span');
  text.className = 'claim-text';
  text.textContent = `[${claim.granularity} ${claim.ordinal}] ${claim.text}`;
  header.appendChild(text);
  if (verdict) {
    const badge = document.createElement('span');
    badge.className = `verdict-badge verdict-${verdict.decision}`;
    badge.textContent = verdict.decision;
    header.appendChild(badge);
    const probability = document.createElement('span');
    probability.className = 'claim-probability';
    probability.textContent = String(verdict.truth_probability);
    header.appendChild(probability);
  }
  const rerun = document.createElement('button');
  rerun.className = 'rerun';
  rerun.textContent = 're-run claim';
  rerun.addEventListener('click', () => handlers.onRerun(claim.id));
  header.appendChild(rerun);
  section.appendChild(header);

  if (!view.expandedClaims.has(claim.id)) {
    return section;
  }

  for (const label of LABELS) {
    const group = evidence.filter((item) => item.label === label);
    if (!group.length) continue;
    const wrap = document.createElement('div');
    wrap.className = `evidence-group group-${label}`;
    const heading = document.createElement('h4');
    heading.textContent = `${label} (${group.length})`;
    wrap.appendChild(heading);
    const collapsed = label === 'baseless' && !view.showBaseless.has(claim.id);
    if (collapsed) {
      const toggle = document.createElement('button');
      toggle.className = 'show-baseless';
      toggle.textContent = `show ${group.length} baseless`;
      toggle.addEventListener('click', () => {
        view.showBaseless.add(claim.id);
        section.dispatchEvent(new CustomEvent('view-changed', { bubbles: true }));
      });
      wrap.appendChild(toggle);
    } else {
      for (const item of group) {
        wrap.appendChild(renderEvidenceCard(item, handlers));
      }
    }
    section.appendChild(wrap);
  }
  return section;
}

export function renderReport(
  container: HTMLElement,
  view: ReportView,
  handlers: ViewHandlers,
): void {
  container.innerHTML = '';
  const { report } = view;

  const header = document.createElement('header');
  header.className = 'article-header';
  const title = document.createElement('h2');
  title.textContent = report.article.title || report.article.id;
  header.appendChild(title);
  const verdict = document.createElement('span');
  verdict.id = 'article-verdict';
  verdict.className = `verdict-badge verdict-${report.article_verdict}`;
  verdict.textContent = report.article_verdict;
  header.appendChild(verdict);
  const probability = document.createElement('span');
  probability.id = 'article-probability';
  probability.textContent = String(report.article_probability);
  header.appendChild(probability);
  container.appendChild(header);

  const byClaim = new Map<string, EvidenceItem[]>();
  for (const item of report.evidence) {
    const bucket = byClaim.get(item.claim_id) ?? [];
    bucket.push(item);
    byClaim.set(item.claim_id, bucket);
  }
  const verdicts = new Map(report.claim_verdicts.map((v) => [v.claim_id, v]));

  const list = document.createElement('div');
  list.id = 'claims';
  for (const claim of report.claims) {
    list.appendChild(
      renderClaim(claim, verdicts.get(claim.id), byClaim.get(claim.id) ?? [], view, handlers),
    );
  }
  container.appendChild(list);
}

/** Swap in the server's recomputed report after an override or rerun. */
export function replaceReport(view: ReportView, report: VerificationReport): ReportView {
  return {
    report,
    expandedClaims: view.expandedClaims,
    showBaseless: view.showBaseless,
    pendingOverrides: new Map(),
  };
}

export { overrideKey };
