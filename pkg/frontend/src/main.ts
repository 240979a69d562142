/** Browser bootstrap: mount the app on #app against the configured service. */

import { App } from "./app.js";

const baseUrl =
	document.querySelector<HTMLMetaElement>('meta[name="service-url"]')?.content ??
	window.location.origin;

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

void new App(root, baseUrl).start();
