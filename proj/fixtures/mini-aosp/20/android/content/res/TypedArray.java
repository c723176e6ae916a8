/*
 * Copyright (C) 2008 The Android Open Source Project
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 */

package android.content.res;

import android.util.TypedValue;

/**
 * Container for an array of values that were retrieved with obtainStyledAttributes.
 */
public class TypedArray {
    private boolean mRecycled;
    private int[] mData;

    /**
     * Retrieve the boolean value for the attribute at <var>index</var>.
     *
     * @param index Index of attribute to retrieve.
     * @param defValue Value to return if the attribute is not defined.
     * @return Attribute boolean value, or defValue if not defined.
     */
    public boolean getBoolean(int index, boolean defValue) {
        index *= AssetManager.STYLE_NUM_ENTRIES;
        final int[] data = mData;
        final int type = data[index + AssetManager.STYLE_TYPE];
        if (type == TypedValue.TYPE_NULL) {
            return defValue;
        }
        return data[index + AssetManager.STYLE_DATA] != 0;
    }

    /**
     * Return the number of values in this array.
     */
    public int length() {
        return mData.length / AssetManager.STYLE_NUM_ENTRIES;
    }
}
