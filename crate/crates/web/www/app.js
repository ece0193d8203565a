import init, { group, twist, reduce } from "./pkg/real_chrom_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseInt($(id).value, 10) || 0;

function theory() {
  const kind = $("theory").value;
  return [kind, kind === "bpr" ? -1 : num("n")];
}

function show(el, f) {
  el.classList.remove("err");
  try {
    return f();
  } catch (e) {
    el.classList.add("err");
    el.textContent = e.message ?? String(e);
  }
}

function runGroup() {
  const out = $("group-out");
  show(out, () => {
    out.textContent = group(...theory(), num("k"), num("l"), $("mode").value);
  });
}

function runTwist() {
  const out = $("twist-out");
  show(out, () => {
    const rows = JSON.parse(twist(...theory(), num("tl"), num("kmin"), num("kmax")));
    const table = document.createElement("table");
    table.innerHTML = "<tr><th>k</th><th>free</th><th>Z/2</th><th>generators</th></tr>";
    for (const r of rows) {
      const tr = table.insertRow();
      for (const v of [r.k, r.freeRank, r.z2Count, r.generators.join(", ")]) {
        tr.insertCell().textContent = v;
      }
    }
    out.replaceChildren(table);
  });
}

function runReduce() {
  const out = $("nf-out");
  show(out, () => {
    out.textContent = reduce(...theory(), $("mono").value);
  });
}

await init();
$("group-go").onclick = runGroup;
$("twist-go").onclick = runTwist;
$("nf-go").onclick = runReduce;
runGroup();
