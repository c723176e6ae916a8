package com.example.guard;

import android.content.res.TypedArray;
import android.os.Build;
import android.view.InputDevice;

public class Probe {
    private final TypedArray attrs;

    public Probe(TypedArray attrs) {
        this.attrs = attrs;
    }

    public boolean addedGuarded(InputDevice device) {
        if (Build.VERSION.SDK_INT >= 16) {
            return device.isVirtual();
        }
        return false;
    }

    public boolean addedUnguarded(InputDevice device) {
        return device.isVirtual();
    }

    public String removedGuarded(int id) {
        if (Build.VERSION.SDK_INT > 15) {
            return null;
        }
        return InputDevice.getDeviceName(id);
    }

    public String removedUnguarded(int id) {
        return InputDevice.getDeviceName(id);
    }

    public boolean semanticGuarded() {
        if (Build.VERSION.SDK_INT < Build.VERSION_CODES.LOLLIPOP) {
            return false;
        } else {
            return attrs.getBoolean(0, false);
        }
    }

    public boolean semanticUnguarded() {
        return attrs.getBoolean(0, false);
    }
}
