/** Request sequencing: the latest edit wins, stale responses are dropped. */
export class RequestGate {
  private seq = 0;

  /** Claim a sequence number for a request about to be issued. */
  next(): number {
    this.seq += 1;
    return this.seq;
  }

  /** True iff no newer request has been issued since `seq` was claimed. */
  isCurrent(seq: number): boolean {
    return seq === this.seq;
  }
}

/** Trailing-edge debounce; used for numeric inputs while the user types. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) {
      clearTimeout(timer);
    }
    timer = setTimeout(() => {
      timer = undefined;
      fn(...args);
    }, waitMs);
  };
}

export const NUMERIC_DEBOUNCE_MS = 250;
