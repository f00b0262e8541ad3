// Correction feedback with an offline draft queue: drafts persist across
// reloads and are flushed in order once the server is reachable again.

import { ApiError, type AdvisoryApi, type FeedbackPayload } from "./api.js";
import { readJson, writeJson, type KeyValueStore } from "./storage.js";

export interface FlushOutcome {
  delivered: string[];
  rejected: Array<{ draft: FeedbackPayload; code: string; message: string }>;
  /** Drafts still queued (a network failure stops the flush part-way). */
  remaining: number;
}

export class FeedbackQueue {
  private queue: FeedbackPayload[];

  constructor(
    private readonly store: KeyValueStore,
    private readonly key: string = "tomatodet.feedback-drafts",
  ) {
    this.queue = readJson<FeedbackPayload[]>(store, key) ?? [];
  }

  drafts(): FeedbackPayload[] {
    return [...this.queue];
  }

  get size(): number {
    return this.queue.length;
  }

  enqueue(draft: FeedbackPayload): number {
    this.queue.push(draft);
    this.persist();
    return this.queue.length;
  }

  /**
   * Send one correction now, or queue it when offline. Server-side
   * validation errors are surfaced to the caller, not queued: a draft the
   * server rejects would be rejected forever.
   */
  async submit(api: AdvisoryApi, draft: FeedbackPayload, online: boolean): Promise<{ id: string } | { queued: number }> {
    if (!online) {
      return { queued: this.enqueue(draft) };
    }
    try {
      return { id: await api.submitFeedback(draft) };
    } catch (err) {
      if (err instanceof ApiError) throw err;
      // transport failure: treat as offline and keep the draft
      return { queued: this.enqueue(draft) };
    }
  }

  /**
   * Deliver queued drafts in order. Validation rejections are dropped and
   * reported; a transport failure stops the flush with the rest still queued.
   */
  async flush(api: AdvisoryApi): Promise<FlushOutcome> {
    const outcome: FlushOutcome = { delivered: [], rejected: [], remaining: 0 };
    while (this.queue.length > 0) {
      const draft = this.queue[0]!;
      try {
        const id = await api.submitFeedback(draft);
        outcome.delivered.push(id);
      } catch (err) {
        if (err instanceof ApiError) {
          outcome.rejected.push({ draft, code: err.code, message: err.message });
        } else {
          break; // still offline: retry this and the rest later
        }
      }
      this.queue.shift();
      this.persist();
    }
    outcome.remaining = this.queue.length;
    return outcome;
  }

  private persist(): void {
    writeJson(this.store, this.key, this.queue);
  }
}
