/**
 * Console wiring: submit an article, watch the job advance through the
 * pipeline stages, then review evidence and push overrides or re-runs.
 * All state shown after a write comes from the server's response.
 */

import { api, ApiError } from './api';
import { pollJob, type PollOptions } from './poll';
import type { EvidenceItem, ReportView, VerdictLabel } from './types';
import {
  clearError,
  createReportView,
  renderReport,
  renderStageTracker,
  replaceReport,
  showError,
} from './view';

interface Elements {
  root: HTMLElement;
  form: HTMLFormElement;
  body: HTMLTextAreaElement;
  title: HTMLInputElement;
  stages: HTMLElement;
  report: HTMLElement;
}

export interface MountOptions {
  poll?: PollOptions;
}

export function mount(root: HTMLElement, options: MountOptions = {}): void {
  root.innerHTML = `
    <div id="error-banner" hidden></div>
    <form id="submit-form">
      <input id="article-title" placeholder="title (optional)" />
      <textarea id="article-body" placeholder="paste the article text" required></textarea>
      <button type="submit">verify</button>
    </form>
    <div id="stage-tracker"></div>
    <div id="report"></div>
  `;
  const elements: Elements = {
    root,
    form: root.querySelector('#submit-form')!,
    body: root.querySelector('#article-body')!,
    title: root.querySelector('#article-title')!,
    stages: root.querySelector('#stage-tracker')!,
    report: root.querySelector('#report')!,
  };
  elements.form.addEventListener('submit', (event) => {
    event.preventDefault();
    void submitAndPoll(elements, options);
  });
}

async function submitAndPoll(elements: Elements, options: MountOptions): Promise<void> {
  clearError(elements.root);
  let jobId: string;
  try {
    jobId = await api.submit({
      body: elements.body.value,
      title: elements.title.value || undefined,
    });
  } catch (err) {
    showError(elements.root, describe(err));
    return;
  }
  const final = await pollJob(jobId, (snapshot) => {
    renderStageTracker(elements.stages, snapshot.state);
  }, options.poll).catch((err) => {
    showError(elements.root, describe(err));
    return null;
  });
  if (!final) return;
  if (final.state === 'failed' || !final.report) {
    showError(elements.root, `job failed: ${final.error ?? 'unknown error'}`);
    return;
  }
  let view = createReportView(final.report);

  const handlers = {
    onOverride: async (item: EvidenceItem, newLabel: VerdictLabel) => {
      clearError(elements.root);
      try {
        const response = await api.override(jobId, item.claim_id, item.result.id, newLabel);
        view = replaceReport(view, response.report);
        renderReport(elements.report, view, handlers);
      } catch (err) {
        showError(elements.root, describe(err));
      }
    },
    onRerun: async (claimId: string) => {
      clearError(elements.root);
      try {
        const response = await api.rerunClaim(jobId, claimId);
        view = replaceReport(view, response.report);
        renderReport(elements.report, view, handlers);
      } catch (err) {
        showError(elements.root, describe(err));
      }
    },
  };

  const rerenderOnToggle = () => renderReport(elements.report, view, handlers);
  elements.report.addEventListener('view-changed', rerenderOnToggle);
  renderReport(elements.report, view, handlers);
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return err.status === 0 ? err.message : `${err.status}: ${err.message}`;
  }
  return String(err);
}

export type { ReportView };
