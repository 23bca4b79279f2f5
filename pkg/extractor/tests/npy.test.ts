import * as assert from 'node:assert/strict'
import { test } from 'node:test'
import * as fs from 'fs'
import * as os from 'os'
import * as path from 'path'
import { execFileSync } from 'child_process'
import { readNpy, writeEmbeddingsNpy, writeLabelsNpy } from '../src/npy'

function tmpdir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), 'npy-test-'))
}

test('embedding NPY header matches the numpy v1.0 convention', () => {
  const dir = tmpdir()
  const file = path.join(dir, 'e.npy')
  writeEmbeddingsNpy(file, new Float32Array([1, 2, 3, 4, 5, 6]), 3, 2)
  const raw = fs.readFileSync(file)
  assert.equal(raw.subarray(0, 6).toString('latin1'), '\x93NUMPY')
  assert.equal(raw[6], 1)
  assert.equal(raw[7], 0)
  const headerLen = raw.readUInt16LE(8)
  assert.equal((10 + headerLen) % 64, 0) // 64-byte aligned payload start
  const header = raw.subarray(10, 10 + headerLen).toString('latin1')
  assert.match(header, /'descr': '<f4'/)
  assert.match(header, /'fortran_order': False/)
  assert.match(header, /'shape': \(3, 2\)/)
  assert.ok(header.endsWith('\n'))
  assert.equal(raw.length, 10 + headerLen + 6 * 4)
})

test('embedding values round trip through the payload', () => {
  const dir = tmpdir()
  const file = path.join(dir, 'e.npy')
  const values = new Float32Array([0.5, -1.25, 3.75, 2.5])
  writeEmbeddingsNpy(file, values, 2, 2)
  const parsed = readNpy(file)
  assert.deepEqual(parsed.shape, [2, 2])
  assert.equal(parsed.descr, '<f4')
  const back = new Float32Array(
    parsed.payload.buffer.slice(
      parsed.payload.byteOffset,
      parsed.payload.byteOffset + parsed.payload.byteLength,
    ),
  )
  assert.deepEqual(Array.from(back), Array.from(values))
})

test('label NPY is 1-D little-endian i8', () => {
  const dir = tmpdir()
  const file = path.join(dir, 'l.npy')
  writeLabelsNpy(file, [0, 3, 1])
  const parsed = readNpy(file)
  assert.equal(parsed.descr, '<i8')
  assert.deepEqual(parsed.shape, [3])
  const back = new BigInt64Array(
    parsed.payload.buffer.slice(
      parsed.payload.byteOffset,
      parsed.payload.byteOffset + parsed.payload.byteLength,
    ),
  )
  assert.deepEqual(Array.from(back), [0n, 3n, 1n])
})

test('negative or fractional labels are rejected', () => {
  const dir = tmpdir()
  assert.throws(() => writeLabelsNpy(path.join(dir, 'l.npy'), [0, -1]), /row 1/)
  assert.throws(() => writeLabelsNpy(path.join(dir, 'l.npy'), [0.5]), /row 0/)
})

test('buffer length must match the declared shape', () => {
  const dir = tmpdir()
  assert.throws(
    () => writeEmbeddingsNpy(path.join(dir, 'e.npy'), new Float32Array(5), 2, 3),
    /expected 2x3/,
  )
})

function pythonReadsOurFiles(): boolean {
  try {
    execFileSync('python3', ['-c', 'import hypercone'], { stdio: 'pipe' })
    return true
  } catch {
    return false
  }
}

test(
  'the hypercone toolkit parses our files without warnings',
  { skip: !pythonReadsOurFiles() },
  () => {
    const dir = tmpdir()
    const emb = path.join(dir, 'e.npy')
    const lab = path.join(dir, 'l.npy')
    writeEmbeddingsNpy(emb, new Float32Array([1, 0, 0, 1, 1, 1]), 3, 2)
    writeLabelsNpy(lab, [0, 1, 1])
    const script = [
      'import sys',
      'from hypercone import read_embeddings, read_labels',
      'e = read_embeddings(sys.argv[1])',
      'l = read_labels(sys.argv[2])',
      'print(e.n, e.d, l.tolist())',
    ].join('\n')
    const out = execFileSync('python3', ['-c', script, emb, lab], {
      encoding: 'utf8',
    })
    assert.equal(out.trim(), '3 2 [0, 1, 1]')
  },
)
