/**
 * Poll a job until it reaches done or failed.
 *
 * Starts at a 1s interval and backs off to 5s for long-running jobs; every
 * snapshot goes to onUpdate so the view can animate stage progression.
 */

import { api } from './api';
import type { JobSnapshot } from './types';

export interface PollOptions {
  initialIntervalMs?: number;
  maxIntervalMs?: number;
  backoffAfter?: number;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export async function pollJob(
  jobId: string,
  onUpdate: (snapshot: JobSnapshot) => void,
  options: PollOptions = {},
): Promise<JobSnapshot> {
  const initial = options.initialIntervalMs ?? 1000;
  const max = options.maxIntervalMs ?? 5000;
  const backoffAfter = options.backoffAfter ?? 10;
  const sleep = options.sleep ?? defaultSleep;

  let polls = 0;
  for (;;) {
    const snapshot = await api.getJob(jobId);
    onUpdate(snapshot);
    if (snapshot.state === 'done' || snapshot.state === 'failed') {
      return snapshot;
    }
    polls += 1;
    await sleep(polls >= backoffAfter ? max : initial);
  }
}
