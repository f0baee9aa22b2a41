// Browser bootstrap: wires the session driver to the document.

import { DriverState, SessionDriver } from "./app.js";
import {
  defaultDocumentTitle,
  renderFamiliarizationInto,
  renderStateInto,
} from "./dom.js";

const root = document.getElementById("app");
if (root) {
  document.title = defaultDocumentTitle;
  const driver = new SessionDriver(window.location.origin, {
    onState: (state: DriverState) => renderStateInto(root, driver, state),
  });
  renderFamiliarizationInto(root);
  driver.start({}).catch((err) => {
    root.innerHTML = `<p class="error">Could not start a session: ${String(err)}</p>`;
  });
}
