/**
 * Alert popups and the run-result banner.
 *
 * Popups show server refusals verbatim; the text that arrives in the
 * error envelope is what the user reads, with no rewording on this side.
 */
export class Notifier {
  private readonly alerts: HTMLElement;
  private readonly banner: HTMLElement;

  constructor(root: Document = document) {
    this.alerts = root.getElementById("alerts")!;
    this.banner = root.getElementById("banner")!;
  }

  /** Red popup carrying a server message word for word. */
  alert(message: string): void {
    this.popup(message, "alert-popup");
  }

  /** Neutral popup for client-side hints (empty target sets and the like). */
  notice(message: string): void {
    this.popup(message, "alert-popup notice");
  }

  private popup(message: string, className: string): void {
    const el = this.alerts.ownerDocument.createElement("div");
    el.className = className;
    el.textContent = message;
    const dismiss = () => el.remove();
    el.addEventListener("click", dismiss);
    this.alerts.appendChild(el);
    setTimeout(dismiss, 6000);
  }

  showPass(elapsedMs: number): void {
    this.setBanner("pass", `PASS (${elapsedMs.toFixed(1)} ms)`);
  }

  showFail(failing: string[], elapsedMs: number): void {
    this.setBanner(
      "fail",
      `FAIL: ${failing.join(", ")} (${elapsedMs.toFixed(1)} ms)`,
    );
  }

  /** Amber banner listing what the pre-run structural check rejected. */
  showBlocked(violations: string[]): void {
    this.setBanner("blocked", `BLOCKED: ${violations.join("; ")}`);
  }

  clearBanner(): void {
    this.banner.className = "";
    this.banner.textContent = "";
    this.banner.hidden = true;
  }

  private setBanner(kind: string, text: string): void {
    this.banner.className = kind;
    this.banner.textContent = text;
    this.banner.hidden = false;
  }
}
