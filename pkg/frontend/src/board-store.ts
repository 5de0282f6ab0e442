/**
 * Bulletin board pinning. Only ticket ids persist (in localStorage); the
 * lines are refetched from the service feed after a reload, keeping the
 * service the single source of rumour records.
 */

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const STORE_KEY = "rumourmill.pinned";

export class BoardStore {
  constructor(private readonly storage: StorageLike) {}

  pinnedIds(): string[] {
    const raw = this.storage.getItem(STORE_KEY);
    if (!raw) return [];
    try {
      const parsed = JSON.parse(raw);
      return Array.isArray(parsed) ? parsed.filter((x) => typeof x === "string") : [];
    } catch {
      return [];
    }
  }

  isPinned(id: string): boolean {
    return this.pinnedIds().includes(id);
  }

  pin(id: string): void {
    const ids = this.pinnedIds();
    if (!ids.includes(id)) {
      ids.push(id);
      this.storage.setItem(STORE_KEY, JSON.stringify(ids));
    }
  }

  unpin(id: string): void {
    this.storage.setItem(STORE_KEY, JSON.stringify(this.pinnedIds().filter((x) => x !== id)));
  }
}
